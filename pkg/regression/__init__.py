from regression.model import (
    INTERCEPT,
    ModelSpec,
    Design,
    CoefficientVector,
    RegressionData,
    FittedModel,
    predict,
    linear_predictors,
    coefficient_table,
)
from regression.likelihood import log_likelihood, gradient, loglik_and_gradient
from regression.fitting import (
    LRTestResult,
    initial_coefficients,
    gradient_hessian,
    fit_mle,
    evaluate_model,
    generating_model,
    standard_errors,
    lr_test,
)

__all__ = [
    "INTERCEPT",
    "ModelSpec",
    "Design",
    "CoefficientVector",
    "RegressionData",
    "FittedModel",
    "predict",
    "linear_predictors",
    "evaluate_model",
    "generating_model",
    "coefficient_table",
    "log_likelihood",
    "gradient",
    "loglik_and_gradient",
    "LRTestResult",
    "initial_coefficients",
    "gradient_hessian",
    "fit_mle",
    "standard_errors",
    "lr_test",
]
