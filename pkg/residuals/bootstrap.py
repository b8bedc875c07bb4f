"""
Bootstrap class residuals.

For each observation the signed multivariate residual l_i is ranked among
B parametric-bootstrap replicates l_i^(b); the rank a_i picks a subinterval
of (0, 1), a uniform draw u_i from it is mapped through Phi^-1.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from config import config
from console import status
from dirichlet import sample_rows
from errors import DomainError, FitError, ReplicateFailureError, UsageError
from regression import FittedModel, RegressionData, fit_mle
from residuals.kinds import ResidualKind
from residuals.univariate import (
    composite_pearson,
    composite_quantile,
    quantile_matrix,
    signed_residuals,
)
from special import RngStream, sample_uniform, std_normal_quantile
from workers import run_tasks


@dataclass(frozen=True)
class BootstrapConfig:
    """
    Replicate count, seed and retry budget.

    refit=False keeps the generating parameters for every replicate instead
    of refitting, which is the known-parameter bootstrap.
    """
    B: int = field(default_factory=lambda: config.BOOTSTRAP_B)
    seed: int = field(default_factory=lambda: config.SEED)
    max_retries_per_replicate: int = field(default_factory=lambda: config.MAX_RETRIES)
    refit: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.B < 1:
            raise DomainError(f"bootstrap needs B >= 1, got {self.B}")
        if self.max_retries_per_replicate < 0:
            raise DomainError("max_retries_per_replicate must be >= 0")


@dataclass
class ClassResidualResult:
    """Class residual s with its ranks a, observed l, uniforms u and replicate pool."""
    kind: ResidualKind
    s: np.ndarray
    a: np.ndarray
    l: np.ndarray
    u: np.ndarray
    replicate_l: np.ndarray = field(repr=False)
    replicate_failures: int = 0

    @property
    def B(self) -> int:
        return self.replicate_l.shape[0]


@dataclass
class Replicate:
    """A simulated response set and the model its residuals are computed under."""
    y: np.ndarray
    fit: FittedModel
    failures: int = 0

    @property
    def fitted_mu(self) -> np.ndarray:
        return self.fit.fitted_mu

    @property
    def fitted_phi(self) -> np.ndarray:
        return self.fit.fitted_phi


def simulate_and_refit(fit: FittedModel, covariates: Mapping[str, np.ndarray], stream: RngStream,
                       max_retries: int, refit: bool = True, replicate: int = 0) -> Replicate:
    """
    Draw responses from the fitted model on the given covariates and refit.

    A failed refit redraws on a fresh sub-stream, up to max_retries times.
    """
    last_error: Optional[Exception] = None
    for attempt in range(max_retries + 1):
        y = sample_rows(fit.fitted_mu, fit.fitted_phi, stream.substream(attempt))
        if not refit:
            return Replicate(y, fit, attempt)
        try:
            refitted = fit_mle(fit.spec, RegressionData(y, covariates))
        except FitError as exc:
            last_error = exc
            continue
        return Replicate(y, refitted, attempt)
    raise ReplicateFailureError(replicate, max_retries + 1, last_error)


def _class_kinds(kinds: Iterable[ResidualKind]) -> List[ResidualKind]:
    kinds = list(kinds)
    for kind in kinds:
        if not kind.is_class:
            raise UsageError(f"{kind.value} is not a bootstrap class residual")
    return kinds


def _randomize(a: np.ndarray, B: int, seed: int) -> np.ndarray:
    """u_i ~ Uniform(a_i/(B+1), (a_i+1)/(B+1)) on stream B + 1 + i."""
    u = np.empty(a.size)
    for i, rank in enumerate(a):
        stream = RngStream(seed, B + 1 + i)
        lo, hi = rank / (B + 1), (rank + 1) / (B + 1)
        draw = sample_uniform(lo, hi, stream)
        while draw <= lo:
            draw = sample_uniform(lo, hi, stream)
        u[i] = draw
    return u


def class_residuals(fit: FittedModel, data: RegressionData, kinds: Sequence[ResidualKind],
                    cfg: BootstrapConfig) -> Dict[ResidualKind, ClassResidualResult]:
    """Several class residuals from one shared pool of bootstrap replicates."""
    kinds = _class_kinds(kinds)
    q = quantile_matrix(data.y, fit.fitted_mu, fit.fitted_phi)
    observed = {kind: signed_residuals(q, data.y, kind) for kind in kinds}

    def replicate(b: int) -> Tuple[Dict[ResidualKind, np.ndarray], int]:
        rep = simulate_and_refit(fit, data.covariates, RngStream(cfg.seed, b),
                                 cfg.max_retries_per_replicate, cfg.refit, b)
        q_b = quantile_matrix(rep.y, rep.fitted_mu, rep.fitted_phi)
        # h2's dominant column comes from the replicate's own responses
        return {kind: signed_residuals(q_b, rep.y, kind) for kind in kinds}, rep.failures

    results = run_tasks(replicate, range(1, cfg.B + 1), cfg.threads)
    failures = sum(f for _, f in results)
    if failures:
        status("Bootstrap", f"{failures} replicate redraw(s) after fit failures")

    out = {}
    for kind in kinds:
        pool = np.vstack([ls[kind] for ls, _ in results])
        a = np.sum(pool < observed[kind][None, :], axis=0)
        u = _randomize(a, cfg.B, cfg.seed)
        out[kind] = ClassResidualResult(
            kind=kind,
            s=std_normal_quantile(u),
            a=a,
            l=observed[kind],
            u=u,
            replicate_l=pool,
            replicate_failures=failures,
        )
    return out


def class_residual(fit: FittedModel, data: RegressionData, kind: ResidualKind,
                   cfg: BootstrapConfig) -> ClassResidualResult:
    """One bootstrap class residual (A1, Q1, A2 or Q2)."""
    return class_residuals(fit, data, [kind], cfg)[kind]


def compute_residuals(fit: FittedModel, data: RegressionData, kinds: Sequence[ResidualKind],
                      cfg: BootstrapConfig) -> Dict[ResidualKind, np.ndarray]:
    """Residual vectors of any kinds; class kinds share one bootstrap pool."""
    out: Dict[ResidualKind, np.ndarray] = {}
    wanted_class = [kind for kind in kinds if kind.is_class]
    if wanted_class:
        for kind, result in class_residuals(fit, data, wanted_class, cfg).items():
            out[kind] = result.s
    if ResidualKind.COMPOSITE_PEARSON in kinds:
        out[ResidualKind.COMPOSITE_PEARSON] = composite_pearson(fit, data)
    if ResidualKind.COMPOSITE_QUANTILE in kinds:
        out[ResidualKind.COMPOSITE_QUANTILE] = composite_quantile(fit, data)
    return {kind: out[kind] for kind in kinds}
