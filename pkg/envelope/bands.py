"""
Envelope bands, exceedance distances and the v-threshold decision rule.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
import pandas as pd

from config import config
from errors import DomainError
from residuals import ResidualKind
from special import std_normal_quantile


@dataclass
class EnvelopeResult:
    """
    Normal probability plot data with its simulated band.

    distances[i] is how far sorted_residuals[i] lies outside the band
    (0 when inside); e is the largest of them.
    """
    sorted_residuals: np.ndarray
    theoretical_quantiles: np.ndarray
    lower_band: np.ndarray
    upper_band: np.ndarray
    distances: np.ndarray
    outside_count: int
    e: float
    kind: Optional[ResidualKind] = None
    metadata: Dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.sorted_residuals.size

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "order_index": np.arange(1, self.n + 1),
            "theoretical_quantile": self.theoretical_quantiles,
            "residual": self.sorted_residuals,
            "lower": self.lower_band,
            "upper": self.upper_band,
        })


@dataclass(frozen=True)
class DetectionRule:
    v: float
    flagged_points: int

    @property
    def flagged(self) -> bool:
        return self.flagged_points > 0


def blom_positions(n: int) -> np.ndarray:
    """Phi^-1((i - 3/8) / (n + 1/4)) for i = 1..n."""
    i = np.arange(1, n + 1, dtype=float)
    return std_normal_quantile((i - 0.375) / (n + 0.25))


def percentile_bands(simulated: np.ndarray, lower: Optional[float] = None,
                     upper: Optional[float] = None):
    """Per-order-statistic percentiles of an R x n matrix of sorted simulated residuals."""
    lower = config.ENVELOPE_LOWER if lower is None else lower
    upper = config.ENVELOPE_UPPER if upper is None else upper
    if not 0 <= lower < upper <= 100:
        raise DomainError(f"band percentiles must satisfy 0 <= lower < upper <= 100, got {lower}, {upper}")
    simulated = np.sort(np.asarray(simulated, dtype=float), axis=1)
    if simulated.shape[0] < 2:
        raise DomainError(f"an envelope needs R >= 2 simulations, got {simulated.shape[0]}")
    return np.percentile(simulated, lower, axis=0), np.percentile(simulated, upper, axis=0)


def build_envelope(residuals: Sequence[float], lower_band: np.ndarray, upper_band: np.ndarray,
                   kind: Optional[ResidualKind] = None, metadata: Optional[Dict] = None) -> EnvelopeResult:
    """Place observed residuals against a band and measure vertical exceedances."""
    r = np.sort(np.asarray(residuals, dtype=float))
    lower_band = np.asarray(lower_band, dtype=float)
    upper_band = np.asarray(upper_band, dtype=float)
    if not (r.size == lower_band.size == upper_band.size):
        raise DomainError("residuals and bands differ in length")
    if np.any(lower_band > upper_band):
        raise DomainError("lower band lies above upper band")
    distances = np.maximum(lower_band - r, 0.0) + np.maximum(r - upper_band, 0.0)
    outside = int(np.count_nonzero(distances > 0))
    return EnvelopeResult(
        sorted_residuals=r,
        theoretical_quantiles=blom_positions(r.size),
        lower_band=lower_band,
        upper_band=upper_band,
        distances=distances,
        outside_count=outside,
        e=float(distances.max()) if outside else 0.0,
        kind=kind,
        metadata=dict(metadata or {}),
    )


def estimate_v(e_values: Sequence[float]) -> float:
    """
    Average of the floor(0.95 g)-th and next order statistics of e (1-based).

    Needs g >= 20 datasets.
    """
    e = np.sort(np.asarray(e_values, dtype=float))
    g = e.size
    if g < 20:
        raise DomainError(f"estimating v needs at least 20 datasets, got {g}")
    if not np.all(np.isfinite(e)) or np.any(e < 0):
        raise DomainError("e values must be finite and nonnegative")
    idx = (95 * g) // 100
    return float((e[idx - 1] + e[idx]) / 2.0)


def detect_misspecification(env: EnvelopeResult, v: float) -> DetectionRule:
    """Count residuals outside the band by v or more; any such point flags the fit."""
    if not v >= 0:
        raise DomainError(f"v must be nonnegative, got {v}")
    outside = env.distances[env.distances > 0]
    return DetectionRule(v=float(v), flagged_points=int(np.count_nonzero(outside >= v)))
