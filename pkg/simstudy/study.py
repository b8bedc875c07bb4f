"""
Scenario studies: distribution of the class residuals per observation
across Monte Carlo replicates with covariates held fixed.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config import config
from console import status
from errors import DomainError
from regression import RegressionData, generating_model
from residuals import CLASS_KINDS, BootstrapConfig, ResidualKind, class_residuals, simulate_and_refit
from simstudy.scenarios import ScenarioConfig, draw_covariates
from simstudy.statistics import ad_statistic_with_clamps, summary_statistics
from special import RngStream
from workers import run_tasks

STATISTICS = ("mean", "variance", "skewness", "kurtosis", "ad")
STATISTIC_LABELS = {
    "mean": "Mean",
    "variance": "Variance",
    "skewness": "Skewness",
    "kurtosis": "Kurtosis",
    "ad": "A-D Statistics",
}

# Full-scale and desk-scale study sizes
FULL_REPLICATES = 2000
FULL_B = 1000
DESK_REPLICATES = 500
DESK_B = 200


@dataclass
class SummaryTable:
    """
    Per-observation statistics for each residual kind.

    values[kind] is an n x 5 array whose columns follow STATISTICS.
    """
    values: Dict[ResidualKind, np.ndarray]
    metadata: Dict = field(default_factory=dict)

    @property
    def kinds(self) -> List[ResidualKind]:
        return list(self.values)

    @property
    def n(self) -> int:
        return next(iter(self.values.values())).shape[0]

    def column_means(self) -> Dict[ResidualKind, Dict[str, float]]:
        return {kind: dict(zip(STATISTICS, arr.mean(axis=0))) for kind, arr in self.values.items()}

    def column_sds(self) -> Dict[ResidualKind, Dict[str, float]]:
        return {kind: dict(zip(STATISTICS, arr.std(axis=0, ddof=1))) for kind, arr in self.values.items()}

    def to_frame(self) -> pd.DataFrame:
        """One row per observation, then Mean and SD footer rows."""
        columns = {"observation": [str(i + 1) for i in range(self.n)] + ["Mean", "SD"]}
        means, sds = self.column_means(), self.column_sds()
        for kind, arr in self.values.items():
            for idx, stat in enumerate(STATISTICS):
                columns[f"{kind.label}_{stat}"] = list(arr[:, idx]) + [means[kind][stat], sds[kind][stat]]
        return pd.DataFrame(columns)


def scenario_summary_frame(tables: Sequence[SummaryTable]) -> pd.DataFrame:
    """Column averages of several studies, one block of five rows per scenario."""
    rows = []
    for table in tables:
        means = table.column_means()
        for stat in STATISTICS:
            row = {"scenario": table.metadata.get("scenario", ""), "statistic": STATISTIC_LABELS[stat]}
            row.update({kind.label: means[kind][stat] for kind in table.kinds})
            rows.append(row)
    return pd.DataFrame(rows)


def run_scenario_study(cfg: ScenarioConfig, replicates: int = DESK_REPLICATES, B: int = DESK_B,
                       seed: Optional[int] = None, threads: int = 1,
                       kinds: Sequence[ResidualKind] = CLASS_KINDS,
                       max_retries: Optional[int] = None) -> SummaryTable:
    """
    Simulate, fit the correct model and compute the class residuals on each
    replicate; summarize every observation across replicates.

    Covariates come from stream (seed, 0) and replicate r from (seed, r), so
    the table depends only on the arguments, never on threads.
    """
    seed = config.SEED if seed is None else seed
    max_retries = config.MAX_RETRIES if max_retries is None else max_retries
    kinds = list(kinds)
    if replicates < 2:
        raise DomainError(f"a study needs at least 2 replicates, got {replicates}")

    covariates = draw_covariates(cfg.covariate_law, cfg.n, RngStream(seed, 0))
    truth = generating_model(cfg.spec, cfg.coefficients, covariates, cfg.n)

    def replicate(r: int):
        stream = RngStream(seed, r)
        rep = simulate_and_refit(truth, covariates, stream, max_retries, True, r)
        boot = BootstrapConfig(B=B, seed=stream.child_seed(0), max_retries_per_replicate=max_retries)
        res = class_residuals(rep.fit, RegressionData(rep.y, covariates), kinds, boot)
        redraws = rep.failures + res[kinds[0]].replicate_failures
        return {kind: res[kind].s for kind in kinds}, redraws

    status("Study", f"scenario {cfg.id}: n={cfg.n}, {replicates} replicates, B={B}")
    results = run_tasks(replicate, range(1, replicates + 1), threads)

    values, clamps = {}, 0
    for kind in kinds:
        s = np.vstack([res[kind] for res, _ in results])
        table = np.empty((cfg.n, len(STATISTICS)))
        for i in range(cfg.n):
            moments = summary_statistics(s[:, i])
            a2, clamped = ad_statistic_with_clamps(s[:, i])
            clamps += clamped
            table[i] = (*moments, a2)
        values[kind] = table
    redraws = sum(r for _, r in results)
    if clamps:
        status("Study", f"{clamps} normal CDF value(s) clamped in Anderson-Darling statistics")

    return SummaryTable(values, metadata={
        "scenario": cfg.id,
        "n": cfg.n,
        "replicates": replicates,
        "B": B,
        "seed": seed,
        "redraws": redraws,
        "ad_clamps": clamps,
    })
