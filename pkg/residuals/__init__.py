from residuals.kinds import ResidualKind, CLASS_KINDS, COMPOSITE_KINDS, ALL_KINDS
from residuals.univariate import (
    quantile_matrix,
    quantile_residuals,
    multivariate_residual,
    aggregate,
    sign_h1,
    signs_h1,
    sign_h2,
    dominant_component,
    signed_residuals,
    composite_pearson,
    composite_quantile,
)
from residuals.bootstrap import (
    BootstrapConfig,
    ClassResidualResult,
    Replicate,
    simulate_and_refit,
    class_residuals,
    class_residual,
    compute_residuals,
)

__all__ = [
    "ResidualKind",
    "CLASS_KINDS",
    "COMPOSITE_KINDS",
    "ALL_KINDS",
    "quantile_matrix",
    "quantile_residuals",
    "multivariate_residual",
    "aggregate",
    "sign_h1",
    "signs_h1",
    "sign_h2",
    "dominant_component",
    "signed_residuals",
    "composite_pearson",
    "composite_quantile",
    "BootstrapConfig",
    "ClassResidualResult",
    "Replicate",
    "simulate_and_refit",
    "class_residuals",
    "class_residual",
    "compute_residuals",
]
