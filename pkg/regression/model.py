"""
Dirichlet logistic regression model.
Mean submodels use the logit link against a reference component,
the precision submodel uses the log link.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from dirichlet import DirichletParams
from errors import DataError, DomainError, NumericalError


INTERCEPT = "(Intercept)"


@dataclass(frozen=True)
class ModelSpec:
    """
    Covariate assignment per submodel.

    mean_covariates has one entry per non-reference component, in component
    order. reference_component is 0-based; its linear predictor is pinned to 0.
    """
    k: int
    mean_covariates: Tuple[Tuple[str, ...], ...]
    precision_covariates: Tuple[str, ...]
    reference_component: int = 0
    component_names: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"a composition needs k >= 2 components, got {self.k}")
        mean = tuple(tuple(cols) for cols in self.mean_covariates)
        if len(mean) != self.k - 1:
            raise DomainError(f"expected {self.k - 1} mean submodels, got {len(mean)}")
        if not 0 <= self.reference_component < self.k:
            raise DomainError(f"reference component {self.reference_component} out of range")
        names = tuple(self.component_names) or tuple(f"y{j + 1}" for j in range(self.k))
        if len(names) != self.k:
            raise DomainError("component_names must have k entries")
        object.__setattr__(self, "mean_covariates", mean)
        object.__setattr__(self, "precision_covariates", tuple(self.precision_covariates))
        object.__setattr__(self, "component_names", names)

    @classmethod
    def uniform(cls, k: int, mean_cols: Sequence[str], precision_cols: Sequence[str],
                reference_component: int = 0, component_names: Sequence[str] = (),
                intercept: bool = True) -> "ModelSpec":
        """Same covariates in every mean submodel, intercepts prepended."""
        prefix = (INTERCEPT,) if intercept else ()
        mean = tuple(prefix + tuple(mean_cols) for _ in range(k - 1))
        return cls(k, mean, prefix + tuple(precision_cols), reference_component, tuple(component_names))

    @property
    def non_reference(self) -> List[int]:
        return [j for j in range(self.k) if j != self.reference_component]

    @property
    def n_params(self) -> int:
        return sum(len(cols) for cols in self.mean_covariates) + len(self.precision_covariates)

    def columns(self) -> set:
        cols = set(self.precision_covariates)
        for sub in self.mean_covariates:
            cols.update(sub)
        cols.discard(INTERCEPT)
        return cols

    def labels(self) -> List[Tuple[str, str]]:
        """(submodel, covariate) for every entry of the flat coefficient vector."""
        out = []
        for j, cols in zip(self.non_reference, self.mean_covariates):
            out.extend((f"mu_{self.component_names[j]}", c) for c in cols)
        out.extend(("phi", c) for c in self.precision_covariates)
        return out

    def design(self, covariates: Mapping[str, np.ndarray], n: int) -> "Design":
        """Build the per-submodel design matrices."""
        missing = self.columns() - set(covariates)
        if missing:
            raise DataError(f"missing covariate column(s): {', '.join(sorted(missing))}")

        def column(name: str) -> np.ndarray:
            if name == INTERCEPT:
                return np.ones(n)
            values = np.asarray(covariates[name], dtype=float).reshape(n)
            bad = np.flatnonzero(~np.isfinite(values))
            if bad.size:
                raise DataError(f"non-finite value in covariate {name!r}", row=int(bad[0]))
            return values

        def build(cols: Tuple[str, ...]) -> np.ndarray:
            parts = [column(c) for c in cols]
            return np.column_stack(parts) if parts else np.zeros((n, 0))

        return Design([build(cols) for cols in self.mean_covariates], build(self.precision_covariates))

    def is_nested_in(self, other: "ModelSpec") -> bool:
        """True if every submodel of self uses a subset of other's covariates."""
        if self.k != other.k or self.reference_component != other.reference_component:
            return False
        pairs = zip(self.mean_covariates + (self.precision_covariates,),
                    other.mean_covariates + (other.precision_covariates,))
        return all(set(mine) <= set(theirs) for mine, theirs in pairs)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "mean_covariates": [list(cols) for cols in self.mean_covariates],
            "precision_covariates": list(self.precision_covariates),
            "reference_component": self.reference_component,
            "component_names": list(self.component_names),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        return cls(
            k=int(data["k"]),
            mean_covariates=tuple(tuple(c) for c in data["mean_covariates"]),
            precision_covariates=tuple(data["precision_covariates"]),
            reference_component=int(data.get("reference_component", 0)),
            component_names=tuple(data.get("component_names", ())),
        )


@dataclass
class Design:
    """Design matrices: one per mean submodel plus the precision submodel."""
    mean: List[np.ndarray]
    precision: np.ndarray


@dataclass(frozen=True)
class CoefficientVector:
    """beta blocks (one per non-reference component) and gamma."""
    beta: Tuple[np.ndarray, ...]
    gamma: np.ndarray

    def __post_init__(self):
        beta = tuple(np.asarray(b, dtype=float) for b in self.beta)
        gamma = np.asarray(self.gamma, dtype=float)
        if not all(np.all(np.isfinite(b)) for b in beta) or not np.all(np.isfinite(gamma)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)

    def flat(self) -> np.ndarray:
        return np.concatenate(list(self.beta) + [self.gamma])

    @classmethod
    def from_flat(cls, spec: ModelSpec, theta: np.ndarray) -> "CoefficientVector":
        theta = np.asarray(theta, dtype=float)
        if theta.size != spec.n_params:
            raise DomainError(f"expected {spec.n_params} coefficients, got {theta.size}")
        blocks, start = [], 0
        for cols in spec.mean_covariates:
            blocks.append(theta[start:start + len(cols)])
            start += len(cols)
        return cls(tuple(blocks), theta[start:])

    @classmethod
    def zeros(cls, spec: ModelSpec) -> "CoefficientVector":
        return cls.from_flat(spec, np.zeros(spec.n_params))


@dataclass(frozen=True)
class RegressionData:
    """n x k responses on the open simplex plus named covariate columns."""
    y: np.ndarray
    covariates: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.ndim != 2 or y.shape[1] < 2:
            raise DataError("responses must be an n x k matrix with k >= 2")
        inside = np.isfinite(y).all(axis=1) & (y > 0).all(axis=1) & (y < 1).all(axis=1)
        unit = np.abs(y.sum(axis=1) - 1.0) <= 1e-9
        bad = np.flatnonzero(~(inside & unit))
        if bad.size:
            raise DataError(f"not a composition: {y[bad[0]].tolist()}", row=int(bad[0]))
        covs = {name: np.asarray(col, dtype=float) for name, col in self.covariates.items()}
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "covariates", covs)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def k(self) -> int:
        return self.y.shape[1]

    def with_responses(self, y: np.ndarray) -> "RegressionData":
        """Same covariates, new responses (a bootstrap or simulated sample)."""
        return RegressionData(y, self.covariates)


@dataclass(frozen=True)
class FittedModel:
    """Estimated coefficients with fitted means, precisions and log-likelihood."""
    spec: ModelSpec
    coef: CoefficientVector
    loglik: float
    fitted_mu: np.ndarray
    fitted_phi: np.ndarray
    std_errors: Optional[np.ndarray] = None
    converged: bool = True
    iterations: int = 0

    @property
    def n(self) -> int:
        return self.fitted_mu.shape[0]

    def params(self, i: int):
        """Dirichlet parameters of observation i."""
        return DirichletParams(self.fitted_mu[i], self.fitted_phi[i])


def predict(spec: ModelSpec, design: Design, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Means (n x k, softmax with max subtraction) and precisions for a flat theta."""
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise NumericalError("non-finite coefficients")
    coef_blocks = CoefficientVector.from_flat(spec, theta)
    n = design.precision.shape[0]
    eta = np.zeros((n, spec.k))
    for idx, j in enumerate(spec.non_reference):
        eta[:, j] = design.mean[idx] @ coef_blocks.beta[idx]
    eta -= eta.max(axis=1, keepdims=True)
    expo = np.exp(eta)
    mu = expo / expo.sum(axis=1, keepdims=True)
    with np.errstate(over="ignore"):
        phi = np.exp(design.precision @ coef_blocks.gamma)
    return mu, phi


def linear_predictors(spec: ModelSpec, coef: CoefficientVector,
                      covariate_row: Mapping[str, float]) -> Tuple[np.ndarray, float]:
    """Mean vector and precision for a single covariate row."""
    row = {name: np.array([value], dtype=float) for name, value in covariate_row.items()}
    mu, phi = predict(spec, spec.design(row, 1), coef.flat())
    if not (np.all(np.isfinite(mu)) and np.isfinite(phi[0]) and phi[0] > 0):
        raise NumericalError("linear predictor produced a non-finite mean or precision")
    return mu[0], float(phi[0])


def coefficient_table(fit: FittedModel) -> List[Dict]:
    """Rows shaped Submodel, Covariate, Estimate, Std. Error, Exp(estim)."""
    theta = fit.coef.flat()
    ses = fit.std_errors if fit.std_errors is not None else np.full(theta.size, np.nan)
    return [
        {
            "submodel": submodel,
            "covariate": covariate,
            "estimate": float(est),
            "std_error": float(se),
            "exp_estimate": float(np.exp(est)),
        }
        for (submodel, covariate), est, se in zip(fit.spec.labels(), theta, ses)
    ]
