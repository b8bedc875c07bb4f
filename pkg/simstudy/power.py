"""
Misspecification power study.

Phase 1 fits the correct model to datasets drawn from distribution set 1
and calibrates one v threshold for the class residuals and one for the
composites. Phase 2 draws each response from set 1 or set 2 (mixture),
fits the same model and counts the points flagged by each residual.
"""

import json
import os
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import config
from console import status
from dirichlet import DirichletParams, sample_rows
from envelope import detect_misspecification, estimate_v, simulated_envelopes
from errors import DomainError, FitError, ReplicateFailureError
from regression import ModelSpec, RegressionData, fit_mle
from residuals import ALL_KINDS, CLASS_KINDS, COMPOSITE_KINDS, BootstrapConfig, ResidualKind
from special import RngStream
from workers import run_tasks

INTERACTION = "d2d3"
MIXTURE_COVARIATES = ("d2", "d3", INTERACTION)

# child_seed labels for the two phases
CORRECT_PHASE = 1
MIXTURE_PHASE = 2


def _load_mixture_config():
    """Load the distribution sets from config/mixture.json."""
    config_path = os.path.join(os.path.dirname(__file__), "..", "config", "mixture.json")
    try:
        with open(config_path) as f:
            return json.load(f)
    except FileNotFoundError:
        print(f"[Power] Warning: {config_path} not found, using empty mixture config")
        return {"cells": []}


@dataclass(frozen=True)
class MixtureConfig:
    """
    Two Dirichlet distributions per covariate cell (d2, d3).
    Each response comes from set1 with probability weight, else from set2.
    """
    cells: Tuple[Tuple[int, int], ...]
    set1: Tuple[DirichletParams, ...]
    set2: Tuple[DirichletParams, ...]
    weight: float = 0.7

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise DomainError(f"mixture weight must lie in [0, 1], got {self.weight}")
        if not (len(self.cells) == len(self.set1) == len(self.set2)) or not self.cells:
            raise DomainError("both distribution sets must cover the same covariate cells")
        if len(set(self.cells)) != len(self.cells):
            raise DomainError("covariate cells must be distinct")

    @property
    def k(self) -> int:
        return self.set1[0].k

    def cell_index(self, d2: np.ndarray, d3: np.ndarray) -> np.ndarray:
        lookup = {cell: idx for idx, cell in enumerate(self.cells)}
        try:
            return np.array([lookup[(int(a), int(b))] for a, b in zip(d2, d3)])
        except KeyError as exc:
            raise DomainError(f"no distribution for covariate cell {exc.args[0]}")

    def parameters(self, covariates: Mapping[str, np.ndarray], use_set1: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Per-observation (mu, phi), from set1 where use_set1 is true, else set2."""
        idx = self.cell_index(covariates["d2"], covariates["d3"])
        mu1 = np.vstack([p.mu for p in self.set1])[idx]
        mu2 = np.vstack([p.mu for p in self.set2])[idx]
        phi1 = np.array([p.phi for p in self.set1])[idx]
        phi2 = np.array([p.phi for p in self.set2])[idx]
        pick = np.asarray(use_set1, dtype=bool)
        return np.where(pick[:, None], mu1, mu2), np.where(pick, phi1, phi2)


def load_mixture_config(weight: Optional[float] = None) -> MixtureConfig:
    """MixtureConfig from config/mixture.json; mean vectors are renormalized to sum 1."""
    raw = _load_mixture_config()
    phi = float(np.exp(raw.get("log_phi", 4.6)))

    def params(values: Sequence[float], cell: Tuple[int, int]) -> DirichletParams:
        mu = np.asarray(values, dtype=float)
        if abs(mu.sum() - 1.0) > 1e-9:
            status("Power", f"cell {cell}: mean vector sums to {mu.sum():.4g}, renormalizing")
        return DirichletParams(mu / mu.sum(), phi)

    cells = tuple((int(c["d2"]), int(c["d3"])) for c in raw.get("cells", []))
    return MixtureConfig(
        cells=cells,
        set1=tuple(params(c["set1"], cell) for c, cell in zip(raw["cells"], cells)),
        set2=tuple(params(c["set2"], cell) for c, cell in zip(raw["cells"], cells)),
        weight=float(raw.get("weight", 0.7)) if weight is None else weight,
    )


def power_model_spec(k: int = 3) -> ModelSpec:
    """Mean submodels saturate the four cells (intercept, d2, d3, d2 x d3); constant precision."""
    return ModelSpec.uniform(k, MIXTURE_COVARIATES, ())


def draw_binary_covariates(n: int, rng: RngStream) -> Dict[str, np.ndarray]:
    """d2, d3 ~ Bernoulli(0.5) independently, plus their product."""
    d = rng.generator.binomial(1, 0.5, size=(n, 2)).astype(float)
    return {"d2": d[:, 0], "d3": d[:, 1], INTERACTION: d[:, 0] * d[:, 1]}


def draw_power_dataset(mix: MixtureConfig, n: int, rng: RngStream, mixture: bool) -> RegressionData:
    """Covariates and responses; without mixture every response comes from set1."""
    covariates = draw_binary_covariates(n, rng)
    use_set1 = rng.generator.random(n) < mix.weight if mixture else np.ones(n, dtype=bool)
    mu, phi = mix.parameters(covariates, use_set1)
    return RegressionData(sample_rows(mu, phi, rng), covariates)


@dataclass
class PowerStudyResult:
    """
    v thresholds and, per phase and kind, the number of flagged points in
    every dataset.
    """
    v_class: float
    v_composite: float
    correct_flags: Dict[ResidualKind, np.ndarray]
    mixture_flags: Dict[ResidualKind, np.ndarray]
    correct_e: Dict[ResidualKind, np.ndarray] = field(default_factory=dict)
    metadata: Dict = field(default_factory=dict)

    def flags(self, phase: str) -> Dict[ResidualKind, np.ndarray]:
        if phase not in ("correct", "mixture"):
            raise DomainError(f"unknown phase {phase!r}")
        return self.correct_flags if phase == "correct" else self.mixture_flags

    def flag_rate(self, phase: str, kind: ResidualKind) -> float:
        """Fraction of datasets with at least one flagged point."""
        counts = self.flags(phase)[kind]
        return float(np.mean(counts > 0)) if counts.size else 0.0

    def histogram_frame(self) -> pd.DataFrame:
        """Datasets per number of flagged points, for every phase and kind."""
        rows = []
        for phase in ("correct", "mixture"):
            for kind, counts in self.flags(phase).items():
                if counts.size == 0:
                    continue
                for points in range(int(counts.max()) + 1):
                    rows.append({
                        "phase": phase,
                        "kind": kind.value,
                        "flagged_points": points,
                        "datasets": int(np.count_nonzero(counts == points)),
                    })
        return pd.DataFrame(rows, columns=["phase", "kind", "flagged_points", "datasets"])


def threshold_for(kind: ResidualKind, v_class: float, v_composite: float) -> float:
    return v_class if kind.is_class else v_composite


def _envelope_dataset(mix: MixtureConfig, n: int, stream: RngStream, mixture: bool,
                      kinds: Sequence[ResidualKind], R: int, b: int, max_retries: int):
    """Draw, fit and envelope one dataset; failed fits redraw the whole dataset."""
    spec = power_model_spec(mix.k)
    last_error = None
    for attempt in range(max_retries + 1):
        sub = stream.substream(attempt)
        data = draw_power_dataset(mix, n, sub, mixture)
        try:
            fit = fit_mle(spec, data)
        except FitError as exc:
            last_error = exc
            continue
        if not fit.converged:
            last_error = FitError("fit did not converge")
            continue
        cfg = BootstrapConfig(B=b, seed=sub.child_seed(0), max_retries_per_replicate=max_retries)
        return simulated_envelopes(fit, data, kinds, R, cfg, b_inner=b), attempt
    raise ReplicateFailureError(stream.stream_id, max_retries + 1, last_error)


def _run_phase(mix: MixtureConfig, g: int, n: int, seed: int, mixture: bool,
               kinds: Sequence[ResidualKind], R: int, b: int, threads: int, max_retries: int):
    phase_seed = RngStream(seed).child_seed(MIXTURE_PHASE if mixture else CORRECT_PHASE)

    def one(j: int):
        return _envelope_dataset(mix, n, RngStream(phase_seed, j), mixture, kinds, R, b, max_retries)

    status("Power", f"{'mixture' if mixture else 'correct-model'} phase: {g} datasets, R={R}, B={b}")
    return run_tasks(one, range(1, g + 1), threads)


def run_power_study(correct_g: int, mixture_g: int, n: int = 50,
                    mix: Optional[MixtureConfig] = None, v_estimation: bool = True,
                    seed: Optional[int] = None, R: Optional[int] = None,
                    B: Optional[int] = None, threads: int = 1,
                    v_values: Optional[Tuple[float, float]] = None,
                    kinds: Sequence[ResidualKind] = ALL_KINDS,
                    max_retries: Optional[int] = None) -> PowerStudyResult:
    """
    Run both phases.

    With v_estimation off, phase 1 is skipped and v_values = (v_class,
    v_composite) are used as given.
    """
    mix = mix or load_mixture_config()
    seed = config.SEED if seed is None else seed
    R = config.ENVELOPE_R if R is None else R
    b = config.ENVELOPE_B_INNER if B is None else B
    max_retries = config.MAX_RETRIES if max_retries is None else max_retries
    kinds = list(kinds)
    redraws = 0

    correct_flags: Dict[ResidualKind, np.ndarray] = {kind: np.zeros(0, dtype=int) for kind in kinds}
    correct_e: Dict[ResidualKind, np.ndarray] = {}
    if v_estimation:
        if correct_g < 20:
            raise DomainError(f"estimating v needs at least 20 correct-model datasets, got {correct_g}")
        results = _run_phase(mix, correct_g, n, seed, False, kinds, R, b, threads, max_retries)
        redraws += sum(attempts for _, attempts in results)
        correct_e = {kind: np.array([envs[kind].e for envs, _ in results]) for kind in kinds}
        v_class = _pooled_v(correct_e, CLASS_KINDS)
        v_composite = _pooled_v(correct_e, COMPOSITE_KINDS)
        correct_flags = {kind: _flag_counts([envs for envs, _ in results], kind, v_class, v_composite)
                         for kind in kinds}
    elif v_values is None:
        raise DomainError("v_values are required when v estimation is off")
    else:
        v_class, v_composite = (float(v) for v in v_values)
    status("Power", f"v(class) = {v_class:.4f}, v(composite) = {v_composite:.4f}")

    mixture_flags: Dict[ResidualKind, np.ndarray] = {kind: np.zeros(0, dtype=int) for kind in kinds}
    if mixture_g > 0:
        results = _run_phase(mix, mixture_g, n, seed, True, kinds, R, b, threads, max_retries)
        redraws += sum(attempts for _, attempts in results)
        mixture_flags = {kind: _flag_counts([envs for envs, _ in results], kind, v_class, v_composite)
                         for kind in kinds}

    return PowerStudyResult(v_class, v_composite, correct_flags, mixture_flags, correct_e, metadata={
        "correct_g": correct_g if v_estimation else 0,
        "mixture_g": mixture_g,
        "n": n,
        "R": R,
        "B_inner": b,
        "weight": mix.weight,
        "seed": seed,
        "redraws": redraws,
        "v_class": v_class,
        "v_composite": v_composite,
    })


def _pooled_v(e: Mapping[ResidualKind, np.ndarray], group: Sequence[ResidualKind]) -> float:
    pooled = [e[kind] for kind in group if kind in e]
    if not pooled:
        return float("nan")
    return estimate_v(np.concatenate(pooled))


def _flag_counts(envelopes: List[Dict], kind: ResidualKind, v_class: float, v_composite: float) -> np.ndarray:
    v = threshold_for(kind, v_class, v_composite)
    return np.array([detect_misspecification(envs[kind], v).flagged_points for envs in envelopes], dtype=int)
