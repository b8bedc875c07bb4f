from envelope.bands import (
    EnvelopeResult,
    DetectionRule,
    blom_positions,
    percentile_bands,
    build_envelope,
    estimate_v,
    detect_misspecification,
)
from envelope.simulation import simulated_envelope, simulated_envelopes
from envelope.plot import POINTS_GID, render_envelope_plot

__all__ = [
    "EnvelopeResult",
    "DetectionRule",
    "blom_positions",
    "percentile_bands",
    "build_envelope",
    "estimate_v",
    "detect_misspecification",
    "simulated_envelope",
    "simulated_envelopes",
    "POINTS_GID",
    "render_envelope_plot",
]
