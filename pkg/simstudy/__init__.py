from simstudy.scenarios import (
    COVARIATES,
    ScenarioConfig,
    scenario_ids,
    scenario_config,
    calibrate_intercepts,
    draw_covariates,
    scenario_parameters,
    generate_scenario_dataset,
)
from simstudy.statistics import (
    SummaryStatistics,
    summary_statistics,
    ad_statistic,
    ad_statistic_with_clamps,
)
from simstudy.study import (
    STATISTICS,
    FULL_REPLICATES,
    FULL_B,
    DESK_REPLICATES,
    DESK_B,
    SummaryTable,
    scenario_summary_frame,
    run_scenario_study,
)
from simstudy.power import (
    MixtureConfig,
    PowerStudyResult,
    load_mixture_config,
    power_model_spec,
    draw_binary_covariates,
    draw_power_dataset,
    run_power_study,
)

__all__ = [
    "COVARIATES",
    "ScenarioConfig",
    "scenario_ids",
    "scenario_config",
    "calibrate_intercepts",
    "draw_covariates",
    "scenario_parameters",
    "generate_scenario_dataset",
    "SummaryStatistics",
    "summary_statistics",
    "ad_statistic",
    "ad_statistic_with_clamps",
    "STATISTICS",
    "FULL_REPLICATES",
    "FULL_B",
    "DESK_REPLICATES",
    "DESK_B",
    "SummaryTable",
    "scenario_summary_frame",
    "run_scenario_study",
    "MixtureConfig",
    "PowerStudyResult",
    "load_mixture_config",
    "power_model_spec",
    "draw_binary_covariates",
    "draw_power_dataset",
    "run_power_study",
]
