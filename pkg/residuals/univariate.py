"""
Univariate quantile residuals and the residuals built from them:
multivariate aggregates, sign functions and the two composites.
"""

import numpy as np

from errors import DataError, DomainError
from regression import FittedModel, RegressionData
from residuals.kinds import ResidualKind
from special import clamped_normal_quantile, reg_inc_beta


def quantile_matrix(y: np.ndarray, mu: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """q_ij = Phi^-1[I_{y_ij}(phi_i mu_ij, phi_i (1 - mu_ij))], CDF clamped to [1e-15, 1 - 1e-15]."""
    a = phi[:, None] * mu
    b = phi[:, None] * (1.0 - mu)
    return clamped_normal_quantile(reg_inc_beta(y, a, b))


def _check_shapes(fit: FittedModel, data: RegressionData) -> None:
    if fit.fitted_mu.shape != data.y.shape:
        raise DataError(
            f"model was fitted to {fit.fitted_mu.shape} responses, data has {data.y.shape}"
        )


def quantile_residuals(fit: FittedModel, data: RegressionData) -> np.ndarray:
    """n x k matrix of univariate quantile residuals at the fitted parameters."""
    _check_shapes(fit, data)
    return quantile_matrix(data.y, fit.fitted_mu, fit.fitted_phi)


def multivariate_residual(q_row: np.ndarray, function: str) -> float:
    """sum |q_ij| ('absolute') or sum q_ij^2 ('quadratic') over components."""
    return float(aggregate(np.asarray(q_row, dtype=float)[None, :], function)[0])


def aggregate(q: np.ndarray, function: str) -> np.ndarray:
    """Row-wise multivariate residual of a quantile-residual matrix."""
    if function == "absolute":
        return np.sum(np.abs(q), axis=1)
    if function == "quadratic":
        return np.sum(q * q, axis=1)
    raise DomainError(f"unknown multivariate function {function!r}")


def _sign(values: np.ndarray) -> np.ndarray:
    # sign(0) is +1
    return np.where(values >= 0, 1, -1)


def sign_h1(q_row: np.ndarray) -> int:
    """Sign of the largest-magnitude quantile residual; ties go to the lowest index."""
    return int(signs_h1(np.asarray(q_row, dtype=float)[None, :])[0])


def signs_h1(q: np.ndarray) -> np.ndarray:
    m = np.argmax(np.abs(q), axis=1)
    return _sign(q[np.arange(q.shape[0]), m])


def dominant_component(y: np.ndarray) -> int:
    """Column with the largest average response; ties go to the lowest index."""
    return int(np.argmax(y.mean(axis=0)))


def sign_h2(q: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Sign of every row's quantile residual in the dominant component of y."""
    return _sign(q[:, dominant_component(y)])


def signed_residuals(q: np.ndarray, y: np.ndarray, kind: ResidualKind) -> np.ndarray:
    """l_i = h_i r_i for a class residual kind."""
    r = aggregate(q, kind.function)
    h = signs_h1(q) if kind.sign == 1 else sign_h2(q, y)
    return h * r


def composite_pearson(fit: FittedModel, data: RegressionData) -> np.ndarray:
    """r_i = sum_j ((y_ij - mu_ij) / sqrt(phi_i))^2."""
    _check_shapes(fit, data)
    return np.sum((data.y - fit.fitted_mu) ** 2, axis=1) / fit.fitted_phi


def composite_quantile(fit: FittedModel, data: RegressionData) -> np.ndarray:
    """r_i = sum_j q_ij^2."""
    return aggregate(quantile_residuals(fit, data), "quadratic")
