"""
Per-observation distributional summaries: moments and the Anderson-Darling
statistic against a fully specified standard normal.
"""

from typing import NamedTuple, Sequence, Tuple

import numpy as np

from errors import DegenerateSampleError, DomainError
from special import PROB_CLAMP, std_normal_cdf


class SummaryStatistics(NamedTuple):
    mean: float
    variance: float   # divisor m - 1
    skewness: float   # m3 / m2^(3/2)
    kurtosis: float   # m4 / m2^2, not excess


def summary_statistics(samples: Sequence[float]) -> SummaryStatistics:
    """Mean, variance, skewness and kurtosis; central moments m_r use divisor m."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise DomainError(f"summary statistics need at least 2 values, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise DomainError("samples must be finite")
    mean = float(x.mean())
    d = x - mean
    m2 = float(np.mean(d ** 2))
    if m2 == 0.0:
        raise DegenerateSampleError("sample has zero variance")
    m3 = float(np.mean(d ** 3))
    m4 = float(np.mean(d ** 4))
    return SummaryStatistics(
        mean=mean,
        variance=m2 * x.size / (x.size - 1),
        skewness=m3 / m2 ** 1.5,
        kurtosis=m4 / m2 ** 2,
    )


def ad_statistic_with_clamps(samples: Sequence[float]) -> Tuple[float, int]:
    """A^2 plus the number of CDF values clamped into [1e-15, 1 - 1e-15]."""
    z = np.sort(np.asarray(samples, dtype=float).ravel())
    m = z.size
    if m < 1:
        raise DomainError("the Anderson-Darling statistic needs at least one value")
    if not np.all(np.isfinite(z)):
        raise DomainError("samples must be finite")
    f = std_normal_cdf(z)
    clamps = int(np.count_nonzero((f < PROB_CLAMP) | (f > 1.0 - PROB_CLAMP)))
    f = np.clip(f, PROB_CLAMP, 1.0 - PROB_CLAMP)
    i = np.arange(1, m + 1)
    a2 = -m - np.sum((2 * i - 1) * (np.log(f) + np.log1p(-f[::-1]))) / m
    return float(a2), clamps


def ad_statistic(samples: Sequence[float]) -> float:
    return ad_statistic_with_clamps(samples)[0]
