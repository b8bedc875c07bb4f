from special.functions import (
    PROB_CLAMP,
    log_gamma,
    digamma,
    reg_inc_beta,
    reg_inc_gamma,
    chi2_sf,
    std_normal_cdf,
    std_normal_quantile,
    clamped_normal_quantile,
)
from special.rng import RngStream, sample_uniform, sample_gamma

__all__ = [
    "PROB_CLAMP",
    "log_gamma",
    "digamma",
    "reg_inc_beta",
    "reg_inc_gamma",
    "chi2_sf",
    "std_normal_cdf",
    "std_normal_quantile",
    "clamped_normal_quantile",
    "RngStream",
    "sample_uniform",
    "sample_gamma",
]
