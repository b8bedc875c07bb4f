"""
Dirichlet distribution in the mean/precision parameterization.
A composition w is Dirichlet(mu, phi) with E(w_j) = mu_j and
Var(w_j) = mu_j (1 - mu_j) / (1 + phi).
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import DataError, DomainError
from special import log_gamma, sample_gamma, RngStream


SUM_TOL = 1e-9           # unit-sum tolerance for in-memory compositions
FILE_SUM_TOL = 1e-6      # unit-sum tolerance for compositions read from files
SAMPLE_CLAMP = 1e-12     # sampled components are kept inside [1e-12, 1 - 1e-12]


def _check_simplex(values: np.ndarray, what: str, tol: float = SUM_TOL) -> None:
    if values.ndim != 1 or values.size < 2:
        raise DomainError(f"{what} must be a vector with k >= 2 components")
    if not np.all(np.isfinite(values)) or np.any(values <= 0) or np.any(values >= 1):
        raise DomainError(f"{what} components must lie strictly inside (0, 1)")
    if abs(values.sum() - 1.0) > tol:
        raise DomainError(f"{what} must sum to 1 (got {values.sum():.12g})")


@dataclass(frozen=True)
class Composition:
    """One compositional observation on the open simplex."""
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        _check_simplex(w, "composition")
        object.__setattr__(self, "w", w)

    @property
    def k(self) -> int:
        return self.w.size


@dataclass(frozen=True)
class DirichletParams:
    """Mean vector on the open simplex plus a positive precision."""
    mu: np.ndarray
    phi: float

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        _check_simplex(mu, "mean vector")
        if not (np.isfinite(self.phi) and self.phi > 0):
            raise DomainError(f"precision phi must be positive, got {self.phi}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "phi", float(self.phi))

    @property
    def k(self) -> int:
        return self.mu.size

    @property
    def shape(self) -> np.ndarray:
        """Common-parameterization shapes phi * mu (internal use)."""
        return self.phi * self.mu

    def variance(self) -> np.ndarray:
        return self.mu * (1.0 - self.mu) / (1.0 + self.phi)


def log_density(w: Composition, p: DirichletParams) -> float:
    """ln f(w) = ln G(phi) - sum ln G(phi mu_j) + sum (phi mu_j - 1) ln w_j."""
    if w.k != p.k:
        raise DomainError(f"dimension mismatch: composition has {w.k} parts, parameters {p.k}")
    alpha = p.shape
    return float(
        log_gamma(p.phi)
        - np.sum(log_gamma(alpha))
        + np.sum((alpha - 1.0) * np.log(w.w))
    )


def log_density_rows(y: np.ndarray, mu: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Row-wise log density for an n x k response, n x k means and n precisions."""
    alpha = phi[:, None] * mu
    return (
        log_gamma(phi)
        - np.sum(log_gamma(alpha), axis=1)
        + np.sum((alpha - 1.0) * np.log(y), axis=1)
    )


def _normalize_gamma_draws(g: np.ndarray) -> np.ndarray:
    """Normalize gamma draws row-wise, clamping underflowed parts inside the simplex."""
    w = g / g.sum(axis=-1, keepdims=True)
    bad = ~np.isfinite(w).all(axis=-1) | (w < SAMPLE_CLAMP).any(axis=-1) | (w > 1 - SAMPLE_CLAMP).any(axis=-1)
    if np.any(bad):
        fixed = np.nan_to_num(w[bad], nan=SAMPLE_CLAMP)
        fixed = np.clip(fixed, SAMPLE_CLAMP, 1 - SAMPLE_CLAMP)
        w[bad] = fixed / fixed.sum(axis=-1, keepdims=True)
    return w


def sample(p: DirichletParams, rng: RngStream) -> Composition:
    """Draw G_j ~ Gamma(phi mu_j, 1) and return G / sum(G)."""
    g = np.asarray(sample_gamma(p.shape, rng), dtype=float)
    return Composition(_normalize_gamma_draws(g[None, :])[0])


def sample_rows(mu: np.ndarray, phi: np.ndarray, rng: RngStream) -> np.ndarray:
    """Draw one composition per row of (mu, phi); returns an n x k matrix."""
    g = np.asarray(sample_gamma(phi[:, None] * mu, rng), dtype=float)
    return _normalize_gamma_draws(g)


def marginal_beta_params(p: DirichletParams, j: int) -> Tuple[float, float]:
    """Component j (0-based) is Beta(phi mu_j, phi (1 - mu_j))."""
    if not 0 <= j < p.k:
        raise DomainError(f"component index {j} out of range for k={p.k}")
    return p.phi * p.mu[j], p.phi * (1.0 - p.mu[j])


def validate_file_rows(y: np.ndarray) -> np.ndarray:
    """
    Check compositions read from a file and renormalize them exactly.
    Rows must be strictly inside the simplex and sum to 1 within 1e-6.
    """
    y = np.asarray(y, dtype=float)
    for i, row in enumerate(y):
        if not np.all(np.isfinite(row)):
            raise DataError("non-finite component", row=i)
        if np.any(row <= 0) or np.any(row >= 1):
            raise DataError(f"components must lie strictly inside (0, 1): {row.tolist()}", row=i)
        if abs(row.sum() - 1.0) > FILE_SUM_TOL:
            raise DataError(f"components sum to {row.sum():.9g}, not 1", row=i)
    return y / y.sum(axis=1, keepdims=True)
