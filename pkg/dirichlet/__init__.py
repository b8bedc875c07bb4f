from dirichlet.distribution import (
    FILE_SUM_TOL,
    Composition,
    DirichletParams,
    log_density,
    log_density_rows,
    sample,
    sample_rows,
    marginal_beta_params,
    validate_file_rows,
)

__all__ = [
    "FILE_SUM_TOL",
    "Composition",
    "DirichletParams",
    "log_density",
    "log_density_rows",
    "sample",
    "sample_rows",
    "marginal_beta_params",
    "validate_file_rows",
]
