"""
Configuration management for Compass.
Loads settings from environment variables.
"""

import os
from dotenv import load_dotenv

load_dotenv()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Config:
    # Parallelism
    THREADS: int = int(os.getenv("COMPASS_THREADS", str(os.cpu_count() or 1)))

    # Randomness
    SEED: int = int(os.getenv("COMPASS_SEED", "20240601"))

    # Bootstrap residuals
    BOOTSTRAP_B: int = int(os.getenv("COMPASS_BOOTSTRAP_B", "1000"))
    MAX_RETRIES: int = int(os.getenv("COMPASS_MAX_RETRIES", "20"))  # redraws per replicate

    # Maximum likelihood
    FIT_MAX_ITER: int = int(os.getenv("COMPASS_FIT_MAX_ITER", "500"))
    FIT_TOL: float = float(os.getenv("COMPASS_FIT_TOL", "1e-6"))

    # Simulated envelopes
    ENVELOPE_R: int = int(os.getenv("COMPASS_ENVELOPE_R", "100"))
    ENVELOPE_LOWER: float = float(os.getenv("COMPASS_ENVELOPE_LOWER", "2.5"))  # percentile
    ENVELOPE_UPPER: float = float(os.getenv("COMPASS_ENVELOPE_UPPER", "97.5"))
    ENVELOPE_B_INNER: int = int(os.getenv("COMPASS_ENVELOPE_B_INNER", "100"))

    # Zero replacement
    ZERO_EPSILON: float = float(os.getenv("COMPASS_ZERO_EPSILON", "0.001"))
    MAX_ZERO_FRACTION: float = float(os.getenv("COMPASS_MAX_ZERO_FRACTION", "0.1"))

    # Progress lines on stderr
    VERBOSE: bool = _flag("COMPASS_VERBOSE", "true")


config = Config()
