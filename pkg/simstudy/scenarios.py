"""
Monte Carlo scenarios: k = 3 responses, two covariates d2 and d3.
The registry is loaded from config/scenarios.json. Scenarios given by a
target average mean vector get their intercepts calibrated on load.
"""

import json
import os
import re
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize, stats

from console import status
from errors import DomainError, NumericalError, UsageError
from regression import CoefficientVector, ModelSpec, RegressionData, predict
from dirichlet import sample_rows
from special import RngStream, sample_gamma

COVARIATES = ("d2", "d3")
COVARIATE_LAWS = ("uniform", "bernoulli_gamma")
GAMMA_SHAPE = 3.0   # Gamma(3, rate 6): mean 1/2, variance 1/12
GAMMA_RATE = 6.0
GRID_SIZE = 200     # quadrature points per covariate for calibration

_ID_PATTERN = re.compile(r"^([1-9][0-9]*)([ab])$")


def _load_scenario_registry():
    """Load the scenario registry from config/scenarios.json."""
    config_path = os.path.join(os.path.dirname(__file__), "..", "config", "scenarios.json")
    try:
        with open(config_path) as f:
            return json.load(f)
    except FileNotFoundError:
        print(f"[Study] Warning: {config_path} not found, using empty scenario registry")
        return {"variants": {}, "scenarios": {}}


_registry = _load_scenario_registry()


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation scenario at a given sample size."""
    id: str
    n: int
    coefficients: CoefficientVector
    covariate_law: str
    gamma1: float
    spec: ModelSpec
    description: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"sample size must be positive, got {self.n}")
        if self.covariate_law not in COVARIATE_LAWS:
            raise DomainError(f"unknown covariate law {self.covariate_law!r}")

    @property
    def mean_coefficients(self) -> np.ndarray:
        """(k - 1) x 3 matrix of beta rows (intercept, d2, d3)."""
        return np.vstack(self.coefficients.beta)


def scenario_ids() -> Tuple[str, ...]:
    """Every registered id in table order: 1a, 2a, ..., 1b, 2b, ..."""
    numbers = sorted(_registry.get("scenarios", {}), key=int)
    variants = sorted(_registry.get("variants", {}))
    return tuple(f"{num}{var}" for var in variants for num in numbers)


def _quadrature(law: str, size: int = GRID_SIZE) -> Tuple[np.ndarray, np.ndarray]:
    """Midpoint grid over the covariate law: (points m x 2, weights m)."""
    mid = (np.arange(size) + 0.5) / size
    if law == "uniform":
        d2, d3 = np.meshgrid(mid, mid, indexing="ij")
        points = np.column_stack([d2.ravel(), d3.ravel()])
        return points, np.full(points.shape[0], 1.0 / points.shape[0])
    if law == "bernoulli_gamma":
        d3 = stats.gamma.ppf(mid, a=GAMMA_SHAPE, scale=1.0 / GAMMA_RATE)
        points = np.vstack([np.column_stack([np.full(size, b), d3]) for b in (0.0, 1.0)])
        return points, np.full(points.shape[0], 1.0 / points.shape[0])
    raise DomainError(f"unknown covariate law {law!r}")


def _average_mean(intercepts: np.ndarray, slopes: np.ndarray, points: np.ndarray,
                  weights: np.ndarray) -> np.ndarray:
    eta = np.zeros((points.shape[0], slopes.shape[0] + 1))
    eta[:, 1:] = intercepts[None, :] + points @ slopes.T
    eta -= eta.max(axis=1, keepdims=True)
    mu = np.exp(eta)
    mu /= mu.sum(axis=1, keepdims=True)
    return weights @ mu


def calibrate_intercepts(target_mean: Sequence[float], slopes: Sequence[Sequence[float]],
                         covariate_law: str = "uniform") -> np.ndarray:
    """
    Intercepts for the non-reference components so that the mean vector,
    averaged over the covariate law, equals target_mean. Slopes are kept.
    """
    target = np.asarray(target_mean, dtype=float)
    target = target / target.sum()
    slopes = np.asarray(slopes, dtype=float)
    if slopes.shape != (target.size - 1, len(COVARIATES)):
        raise DomainError(f"slopes must be {target.size - 1} x {len(COVARIATES)}")
    points, weights = _quadrature(covariate_law)
    goal = np.log(target[1:] / target[0])

    def residual(b: np.ndarray) -> np.ndarray:
        avg = _average_mean(b, slopes, points, weights)
        return np.log(avg[1:] / avg[0]) - goal

    start = goal - slopes @ (weights @ points)
    sol = optimize.root(residual, start, method="hybr", options={"xtol": 1e-12})
    if not sol.success or np.max(np.abs(residual(sol.x))) > 1e-9:
        raise NumericalError(f"intercept calibration did not converge: {sol.message}")
    return np.asarray(sol.x, dtype=float)


def _scenario_spec(precision_varies: bool) -> ModelSpec:
    precision = COVARIATES if precision_varies else ()
    return ModelSpec.uniform(3, COVARIATES, precision)


def scenario_config(scenario_id: str, n: int) -> ScenarioConfig:
    """Build a registered scenario (e.g. '2a') at sample size n."""
    match = _ID_PATTERN.match(scenario_id.strip().lower())
    entry = _registry.get("scenarios", {}).get(match.group(1)) if match else None
    variant = _registry.get("variants", {}).get(match.group(2)) if match else None
    if entry is None or variant is None:
        raise UsageError(f"unknown scenario {scenario_id!r} (expected one of {', '.join(scenario_ids())})")

    law = entry.get("covariate_law", "uniform")
    if "mean_coefficients" in entry:
        beta = np.asarray(entry["mean_coefficients"], dtype=float)
    else:
        slopes = np.asarray(entry["mean_slopes"], dtype=float)
        intercepts = calibrate_intercepts(entry["target_mean"], slopes, law)
        beta = np.column_stack([intercepts, slopes])
        status("Study", f"scenario {match.group(1)} calibrated intercepts: "
                        + ", ".join(f"{b:.6f}" for b in intercepts))

    precision_slopes = entry.get("precision_slopes")
    gamma1 = float(variant["gamma1"])
    gamma = [gamma1] + (list(precision_slopes) if precision_slopes else [])
    return ScenarioConfig(
        id=match.group(0),
        n=int(n),
        coefficients=CoefficientVector(tuple(beta), np.asarray(gamma, dtype=float)),
        covariate_law=law,
        gamma1=gamma1,
        spec=_scenario_spec(bool(precision_slopes)),
        description=entry.get("description", ""),
    )


def draw_covariates(law: str, n: int, rng: RngStream) -> Dict[str, np.ndarray]:
    """d2, d3 ~ U(0,1) independently, or d2 ~ Bernoulli(0.5) and d3 ~ Gamma(3, rate 6)."""
    if law == "uniform":
        u = rng.generator.random((n, 2))
        return {"d2": u[:, 0], "d3": u[:, 1]}
    if law == "bernoulli_gamma":
        d2 = rng.generator.binomial(1, 0.5, size=n).astype(float)
        d3 = np.asarray(sample_gamma(np.full(n, GAMMA_SHAPE), rng)) / GAMMA_RATE
        return {"d2": d2, "d3": d3}
    raise DomainError(f"unknown covariate law {law!r}")


def scenario_parameters(cfg: ScenarioConfig, covariates: Mapping[str, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """True (mu, phi) of every observation."""
    n = len(next(iter(covariates.values())))
    return predict(cfg.spec, cfg.spec.design(covariates, n), cfg.coefficients.flat())


def generate_scenario_dataset(cfg: ScenarioConfig, rng: RngStream,
                              covariates: Optional[Mapping[str, np.ndarray]] = None):
    """
    Responses drawn from the scenario's model. Covariates are drawn from rng
    unless given; studies pass the same covariates to every replicate.
    """
    if covariates is None:
        covariates = draw_covariates(cfg.covariate_law, cfg.n, rng)
    mu, phi = scenario_parameters(cfg, covariates)
    y = sample_rows(mu, phi, rng)
    return RegressionData(y, covariates), covariates

