"""
Simulated envelopes.
Datasets are drawn from the fitted model, refitted, and the chosen residuals
recomputed on each; class residuals run their own inner bootstrap.
"""

from dataclasses import replace
from typing import Dict, Optional, Sequence

import numpy as np

from config import config
from console import status
from envelope.bands import EnvelopeResult, build_envelope, percentile_bands
from errors import DomainError, NumericalError
from regression import FittedModel, RegressionData
from residuals import BootstrapConfig, ResidualKind, compute_residuals, simulate_and_refit
from special import RngStream
from workers import run_tasks

# child_seed label for the envelope study; the bootstrap uses streams (seed, b) directly
ENVELOPE_LABEL = 1 << 32


def simulated_envelopes(fit: FittedModel, data: RegressionData, kinds: Sequence[ResidualKind],
                        R: Optional[int] = None, cfg: Optional[BootstrapConfig] = None,
                        b_inner: Optional[int] = None, lower: Optional[float] = None,
                        upper: Optional[float] = None) -> Dict[ResidualKind, EnvelopeResult]:
    """
    Envelopes for several residual kinds over one set of R simulated datasets.

    b_inner sets the bootstrap size inside each simulation (defaults to cfg.B).
    """
    R = config.ENVELOPE_R if R is None else R
    cfg = cfg or BootstrapConfig()
    b_inner = cfg.B if b_inner is None else b_inner
    kinds = list(kinds)
    if R < 2:
        raise DomainError(f"an envelope needs R >= 2 simulations, got {R}")
    if not fit.converged:
        raise NumericalError("envelope needs a converged fit")

    observed = compute_residuals(fit, data, kinds, cfg)
    root = RngStream(RngStream(cfg.seed).child_seed(ENVELOPE_LABEL))

    def simulate(r: int):
        stream = RngStream(root.seed, r)
        rep = simulate_and_refit(fit, data.covariates, stream, cfg.max_retries_per_replicate, cfg.refit, r)
        # label 0 is never taken by substream()
        inner = replace(cfg, B=b_inner, seed=stream.child_seed(0), threads=1)
        sim = compute_residuals(rep.fit, data.with_responses(rep.y), kinds, inner)
        return {kind: np.sort(values) for kind, values in sim.items()}, rep.failures

    status("Envelope", f"simulating {R} datasets for {len(kinds)} residual(s), inner B={b_inner}")
    results = run_tasks(simulate, range(1, R + 1), cfg.threads)
    redraws = sum(f for _, f in results)

    out = {}
    for kind in kinds:
        sims = np.vstack([res[kind] for res, _ in results])
        lo, hi = percentile_bands(sims, lower, upper)
        out[kind] = build_envelope(observed[kind], lo, hi, kind=kind, metadata={
            "kind": kind.value,
            "R": R,
            "B": cfg.B,
            "B_inner": b_inner,
            "lower_percentile": config.ENVELOPE_LOWER if lower is None else lower,
            "upper_percentile": config.ENVELOPE_UPPER if upper is None else upper,
            "seed": cfg.seed,
            "redraws": redraws,
        })
    return out


def simulated_envelope(fit: FittedModel, data: RegressionData, kind: ResidualKind,
                       R: Optional[int] = None, cfg: Optional[BootstrapConfig] = None,
                       b_inner: Optional[int] = None) -> EnvelopeResult:
    return simulated_envelopes(fit, data, [kind], R, cfg, b_inner)[kind]
