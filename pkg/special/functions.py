"""
Scalar special functions.
Thin, validated wrappers around scipy.special. Each accepts a float or an
array and returns the same shape back.
"""

from typing import Union

import numpy as np
from scipy import special as sp

from errors import DomainError


ArrayLike = Union[float, np.ndarray]

# Bounds for probabilities passed to the normal quantile
PROB_CLAMP = 1e-15


def _out(value: np.ndarray, *inputs) -> ArrayLike:
    """Return a Python float for scalar input, the array otherwise."""
    if all(np.ndim(v) == 0 for v in inputs):
        return float(value)
    return value


def _require(condition: np.ndarray, message: str) -> None:
    if not np.all(condition):
        raise DomainError(message)


def log_gamma(x: ArrayLike) -> ArrayLike:
    """ln Gamma(x) for x > 0."""
    arr = np.asarray(x, dtype=float)
    _require(np.isfinite(arr) & (arr > 0), f"log_gamma requires finite x > 0, got {x!r}")
    return _out(sp.gammaln(arr), x)


def digamma(x: ArrayLike) -> ArrayLike:
    """psi(x) = d/dx ln Gamma(x) for x > 0."""
    arr = np.asarray(x, dtype=float)
    _require(np.isfinite(arr) & (arr > 0), f"digamma requires finite x > 0, got {x!r}")
    return _out(sp.psi(arr), x)


def reg_inc_beta(x: ArrayLike, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """
    Regularized incomplete beta I_x(a, b), the Beta(a, b) distribution function.

    scipy evaluates it with the continued fraction and switches to
    1 - I_{1-x}(b, a) above x > (a + 1) / (a + b + 2).
    """
    xa = np.asarray(x, dtype=float)
    aa = np.asarray(a, dtype=float)
    ba = np.asarray(b, dtype=float)
    _require((xa >= 0) & (xa <= 1), f"reg_inc_beta requires 0 <= x <= 1, got {x!r}")
    _require(np.isfinite(aa) & (aa > 0), f"reg_inc_beta requires a > 0, got {a!r}")
    _require(np.isfinite(ba) & (ba > 0), f"reg_inc_beta requires b > 0, got {b!r}")
    return _out(sp.betainc(aa, ba, xa), x, a, b)


def reg_inc_gamma(x: ArrayLike, s: ArrayLike) -> ArrayLike:
    """Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s)."""
    xa = np.asarray(x, dtype=float)
    sa = np.asarray(s, dtype=float)
    _require(np.isfinite(sa) & (sa > 0), f"reg_inc_gamma requires s > 0, got {s!r}")
    _require(~np.isnan(xa) & (xa >= 0), f"reg_inc_gamma requires x >= 0, got {x!r}")
    return _out(sp.gammainc(sa, xa), x, s)


def chi2_sf(statistic: float, df: int) -> float:
    """Upper tail of the chi-square distribution, 1 - P(df/2, statistic/2)."""
    if df <= 0:
        raise DomainError(f"chi-square needs df >= 1, got {df}")
    return float(1.0 - reg_inc_gamma(max(statistic, 0.0) / 2.0, df / 2.0))


def std_normal_cdf(z: ArrayLike) -> ArrayLike:
    """Standard normal distribution function Phi(z)."""
    arr = np.asarray(z, dtype=float)
    _require(~np.isnan(arr), "std_normal_cdf got NaN")
    return _out(sp.ndtr(arr), z)


def std_normal_quantile(p: ArrayLike) -> ArrayLike:
    """Inverse of Phi on the open interval (0, 1)."""
    arr = np.asarray(p, dtype=float)
    _require((arr > 0) & (arr < 1), f"std_normal_quantile requires 0 < p < 1, got {p!r}")
    return _out(sp.ndtri(arr), p)


def clamped_normal_quantile(p: ArrayLike, bound: float = PROB_CLAMP) -> ArrayLike:
    """Phi^-1 of p clamped to [bound, 1 - bound]; caps results near +-8."""
    arr = np.clip(np.asarray(p, dtype=float), bound, 1.0 - bound)
    return std_normal_quantile(_out(arr, p))
