"""
SVG rendering of normal probability plots with simulated envelopes.
Output is byte-stable: fixed hash salt, no date stamp.
"""

from pathlib import Path
from typing import Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from envelope.bands import EnvelopeResult  # noqa: E402
from errors import DomainError  # noqa: E402

POINTS_GID = "residual-points"


def render_envelope_plot(env: EnvelopeResult, path: Union[str, Path]) -> Path:
    """Write points, band polylines and the identity line to an SVG file."""
    if env.n == 0:
        raise DomainError("cannot plot an envelope with no residuals")
    path = Path(path)
    x = env.theoretical_quantiles
    label = env.kind.label if env.kind is not None else "residual"

    with plt.rc_context({"svg.hashsalt": "compass-envelope", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(5.0, 5.0))
        ax.plot(x, env.lower_band, color="0.3", linewidth=1.0, gid="lower-band")
        ax.plot(x, env.upper_band, color="0.3", linewidth=1.0, gid="upper-band")
        lim = [min(x[0], env.lower_band.min()), max(x[-1], env.upper_band.max())]
        ax.plot(lim, lim, color="0.6", linestyle="--", linewidth=0.8, gid="identity-line")
        ax.plot(x, env.sorted_residuals, linestyle="none", marker="o", markersize=3.5,
                color="black", gid=POINTS_GID)
        ax.set_xlabel("Theoretical N(0,1) quantiles")
        ax.set_ylabel(f"Sorted {label}")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
