"""
Log-likelihood and analytic gradient of the Dirichlet regression model.
"""

from typing import Tuple

import numpy as np

from dirichlet import log_density_rows
from errors import CompassError, DataError
from regression.model import CoefficientVector, Design, ModelSpec, RegressionData, predict
from special import digamma


def loglik_and_gradient(spec: ModelSpec, design: Design, log_y: np.ndarray,
                        y: np.ndarray, theta: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Summed log-likelihood and its gradient with respect to the flat theta.

    With g_ij = ln y_ij - psi(phi_i mu_ij) and gbar_i = sum_j mu_ij g_ij:
      d ll_i / d eta_ij   = phi_i mu_ij (g_ij - gbar_i)
      d ll_i / d ln phi_i = phi_i (psi(phi_i) + gbar_i)
    Returns (-inf, nan-gradient) where the parameters leave the domain.
    """
    try:
        mu, phi = predict(spec, design, theta)
        alpha = phi[:, None] * mu
        ll = float(np.sum(log_density_rows(y, mu, phi)))
        g = log_y - digamma(alpha)
        psi_phi = digamma(phi)
    except CompassError:
        return -np.inf, np.full(np.size(theta), np.nan)
    if not np.isfinite(ll):
        return -np.inf, np.full(np.size(theta), np.nan)

    gbar = np.sum(mu * g, axis=1)
    d_eta = phi[:, None] * mu * (g - gbar[:, None])
    d_logphi = phi * (psi_phi + gbar)

    blocks = [x.T @ d_eta[:, j] for x, j in zip(design.mean, spec.non_reference)]
    blocks.append(design.precision.T @ d_logphi)
    return ll, np.concatenate(blocks)


def _prepare(spec: ModelSpec, data: RegressionData) -> Tuple[Design, np.ndarray]:
    if data.k != spec.k:
        raise DataError(f"data has {data.k} components, model expects {spec.k}")
    return spec.design(data.covariates, data.n), np.log(data.y)


def log_likelihood(spec: ModelSpec, coef: CoefficientVector, data: RegressionData) -> float:
    """Sum over observations of the Dirichlet log density at the model's parameters."""
    design, log_y = _prepare(spec, data)
    ll, _ = loglik_and_gradient(spec, design, log_y, data.y, coef.flat())
    return ll


def gradient(spec: ModelSpec, coef: CoefficientVector, data: RegressionData) -> np.ndarray:
    """Analytic gradient of log_likelihood, flattened as CoefficientVector.flat()."""
    design, log_y = _prepare(spec, data)
    _, grad = loglik_and_gradient(spec, design, log_y, data.y, coef.flat())
    return grad
