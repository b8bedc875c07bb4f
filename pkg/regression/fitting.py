"""
Maximum likelihood fitting, standard errors and likelihood-ratio tests.
"""

import warnings
from typing import Callable, Mapping, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from config import config
from errors import (
    DataError,
    FitError,
    FitQualityError,
    NumericalError,
    SingularInformationError,
)
from regression.likelihood import loglik_and_gradient
from regression.model import (
    INTERCEPT,
    CoefficientVector,
    FittedModel,
    ModelSpec,
    RegressionData,
    predict,
)
from special import chi2_sf


# Newton polishing after BFGS
MAX_NEWTON_STEPS = 20
# Condition number above which the observed information is treated as singular
MAX_CONDITION = 1e12


Objective = Callable[[np.ndarray], Tuple[float, np.ndarray]]


class LRTestResult(NamedTuple):
    statistic: float
    df: int
    p: float


def initial_coefficients(spec: ModelSpec, data: RegressionData) -> CoefficientVector:
    """
    Cheap starting point inside the domain.

    Mean intercepts are log(ybar_j / ybar_ref), slopes 0. The precision
    intercept is the log of the method-of-moments precision
    ybar_j (1 - ybar_j) / s_j^2 - 1 averaged over components.
    """
    ybar = data.y.mean(axis=0)
    ref = spec.reference_component
    beta = []
    for j, cols in zip(spec.non_reference, spec.mean_covariates):
        block = np.zeros(len(cols))
        if INTERCEPT in cols:
            block[cols.index(INTERCEPT)] = np.log(ybar[j] / ybar[ref])
        beta.append(block)

    gamma = np.zeros(len(spec.precision_covariates))
    if INTERCEPT in spec.precision_covariates:
        var = data.y.var(axis=0, ddof=1) if data.n > 1 else np.zeros(spec.k)
        with np.errstate(divide="ignore", invalid="ignore"):
            phis = ybar * (1.0 - ybar) / var - 1.0
        phis = phis[np.isfinite(phis) & (phis > 0)]
        phi0 = float(np.mean(phis)) if phis.size else 1.0
        gamma[spec.precision_covariates.index(INTERCEPT)] = np.log(phi0)
    return CoefficientVector(tuple(beta), gamma)


def gradient_hessian(grad_fn: Callable[[np.ndarray], np.ndarray], theta: np.ndarray) -> np.ndarray:
    """Central differences of the analytic gradient, step 1e-5 * max(1, |theta_i|)."""
    p = theta.size
    hess = np.empty((p, p))
    for i in range(p):
        h = 1e-5 * max(1.0, abs(theta[i]))
        step = np.zeros(p)
        step[i] = h
        hess[:, i] = (grad_fn(theta + step) - grad_fn(theta - step)) / (2.0 * h)
    return 0.5 * (hess + hess.T)


def _newton_polish(objective: Objective, theta: np.ndarray, tol: float) -> Tuple[np.ndarray, int]:
    """Damped Newton steps until the gradient max-norm drops below tol."""
    ll, grad = objective(theta)
    steps = 0
    while steps < MAX_NEWTON_STEPS and np.max(np.abs(grad)) > tol:
        hess = gradient_hessian(lambda t: objective(t)[1], theta)
        try:
            direction = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(direction)) or grad @ direction <= 0:
            direction = grad / max(1.0, np.linalg.norm(grad))

        t = 1.0
        slack = 1e-10 * max(1.0, abs(ll))
        while t > 1e-8:
            candidate = theta + t * direction
            ll_c, grad_c = objective(candidate)
            if np.isfinite(ll_c) and ll_c >= ll - slack:
                break
            t *= 0.5
        else:
            break
        theta, ll, grad = candidate, ll_c, grad_c
        steps += 1
    return theta, steps


def fit_mle(spec: ModelSpec, data: RegressionData, max_iter: Optional[int] = None,
            tol: Optional[float] = None, init: Optional[CoefficientVector] = None) -> FittedModel:
    """
    Maximum likelihood fit by BFGS on the unconstrained coefficient vector.

    Converged means the gradient max-norm is at most tol. Raises FitError when
    the likelihood cannot be evaluated or the optimizer ends below its start.
    """
    max_iter = config.FIT_MAX_ITER if max_iter is None else max_iter
    tol = config.FIT_TOL if tol is None else tol
    if data.k != spec.k:
        raise DataError(f"data has {data.k} components, model expects {spec.k}")
    if data.n <= spec.n_params:
        raise DataError(f"need more observations ({data.n}) than parameters ({spec.n_params})")

    design = spec.design(data.covariates, data.n)
    log_y = np.log(data.y)

    def objective(theta: np.ndarray) -> Tuple[float, np.ndarray]:
        return loglik_and_gradient(spec, design, log_y, data.y, theta)

    def negative(theta: np.ndarray) -> Tuple[float, np.ndarray]:
        ll, grad = objective(theta)
        if not np.isfinite(ll):
            return np.inf, np.zeros_like(theta)
        return -ll, -grad

    theta0 = (init if init is not None else initial_coefficients(spec, data)).flat()
    ll0, _ = objective(theta0)
    if not np.isfinite(ll0):
        raise FitError("log-likelihood is not finite at the initial point")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        result = minimize(negative, theta0, jac=True, method="BFGS",
                          options={"gtol": tol, "maxiter": max_iter})

    theta = np.asarray(result.x, dtype=float)
    iterations = int(result.nit)
    ll, grad = objective(theta)
    if not np.isfinite(ll):
        raise FitError(f"log-likelihood not finite at the optimizer's end point ({result.message})")
    if np.max(np.abs(grad)) > tol:
        theta, extra = _newton_polish(objective, theta, tol)
        iterations += extra
        ll, grad = objective(theta)
    if ll < ll0 - 1e-8 * max(1.0, abs(ll0)):
        raise FitError("optimizer finished below the initial log-likelihood")

    mu, phi = predict(spec, design, theta)
    return FittedModel(
        spec=spec,
        coef=CoefficientVector.from_flat(spec, theta),
        loglik=ll,
        fitted_mu=mu,
        fitted_phi=phi,
        converged=bool(np.max(np.abs(grad)) <= tol),
        iterations=iterations,
    )


def standard_errors(fit: FittedModel, data: RegressionData) -> np.ndarray:
    """Square roots of the diagonal of the inverse observed information."""
    if not fit.converged:
        raise NumericalError("standard errors need a converged fit")
    spec = fit.spec
    design = spec.design(data.covariates, data.n)
    log_y = np.log(data.y)

    def grad_fn(theta: np.ndarray) -> np.ndarray:
        return loglik_and_gradient(spec, design, log_y, data.y, theta)[1]

    info = -gradient_hessian(grad_fn, fit.coef.flat())
    if not np.all(np.isfinite(info)):
        raise SingularInformationError(float("inf"))
    condition = float(np.linalg.cond(info))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularInformationError(condition)
    variances = np.diag(np.linalg.inv(info))
    if np.any(variances <= 0):
        raise SingularInformationError(condition)
    return np.sqrt(variances)


def lr_test(full: FittedModel, reduced: FittedModel) -> LRTestResult:
    """Likelihood-ratio test of a reduced model nested in a full one."""
    if not reduced.spec.is_nested_in(full.spec):
        raise DataError("reduced model is not nested in the full model")
    if full.n != reduced.n:
        raise DataError("models were fitted to different numbers of observations")
    if not (full.converged and reduced.converged):
        raise NumericalError("likelihood-ratio test needs converged fits")

    statistic = 2.0 * (full.loglik - reduced.loglik)
    if statistic < -1e-6:
        raise FitQualityError(f"negative likelihood-ratio statistic {statistic:.6g}")
    statistic = max(statistic, 0.0)
    df = full.spec.n_params - reduced.spec.n_params
    p = 1.0 if df == 0 else chi2_sf(statistic, df)
    return LRTestResult(statistic, df, p)


def evaluate_model(spec: ModelSpec, coef: CoefficientVector, data: RegressionData,
                   converged: bool = True, iterations: int = 0,
                   std_errors: Optional[np.ndarray] = None) -> FittedModel:
    """FittedModel at fixed coefficients, without optimization."""
    design = spec.design(data.covariates, data.n)
    mu, phi = predict(spec, design, coef.flat())
    ll, _ = loglik_and_gradient(spec, design, np.log(data.y), data.y, coef.flat())
    return FittedModel(
        spec=spec,
        coef=coef,
        loglik=ll,
        fitted_mu=mu,
        fitted_phi=phi,
        std_errors=std_errors,
        converged=converged,
        iterations=iterations,
    )


def generating_model(spec: ModelSpec, coef: CoefficientVector,
                     covariates: Mapping[str, np.ndarray], n: int) -> FittedModel:
    """
    The model at known coefficients on covariates alone, for simulation.
    No responses are attached, so loglik is NaN.
    """
    mu, phi = predict(spec, spec.design(covariates, n), coef.flat())
    return FittedModel(spec=spec, coef=coef, loglik=float("nan"), fitted_mu=mu, fitted_phi=phi)
