"""
Reproducible random streams.
A stream is keyed by (seed, stream_id) on numpy's counter-based Philox
generator, so replicate b draws the same numbers whatever order or thread
it runs in.
"""

from typing import Union

import numpy as np

from errors import DomainError


UINT64_LIMIT = 2 ** 64


class RngStream:
    """
    An independent random stream identified by (seed, stream_id).

    Two streams with equal keys produce identical sequences. The Philox key
    packs stream_id into the high 64 bits and seed into the low 64 bits.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        for name, value in (("seed", seed), ("stream_id", stream_id)):
            if not 0 <= int(value) < UINT64_LIMIT:
                raise DomainError(f"{name} must be a 64-bit unsigned integer, got {value}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        key = (self.stream_id << 64) | self.seed
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def child_seed(self, *labels: int) -> int:
        """Derive a 64-bit seed for a nested study, e.g. one envelope simulation."""
        entropy = [self.seed, self.stream_id, *(int(label) for label in labels)]
        state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
        return int(state[0])

    def substream(self, attempt: int) -> "RngStream":
        """Fresh stream for redraw number `attempt`; attempt 0 is the stream itself."""
        if attempt == 0:
            return RngStream(self.seed, self.stream_id)
        return RngStream(self.child_seed(attempt), self.stream_id)


def sample_uniform(lo: float, hi: float, rng: RngStream) -> float:
    """One draw from Uniform(lo, hi)."""
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise DomainError(f"sample_uniform requires lo < hi, got ({lo}, {hi})")
    return float(rng.generator.uniform(lo, hi))


def sample_gamma(shape: Union[float, np.ndarray], rng: RngStream) -> Union[float, np.ndarray]:
    """
    Gamma(shape, 1) draws.

    numpy's sampler is the Marsaglia-Tsang rejection method, boosted with a
    uniform power for shape < 1, so any positive shape is valid.
    """
    arr = np.asarray(shape, dtype=float)
    if not np.all(np.isfinite(arr) & (arr > 0)):
        raise DomainError(f"sample_gamma requires shape > 0, got {shape!r}")
    draws = rng.generator.standard_gamma(arr)
    if np.ndim(shape) == 0:
        return float(draws)
    return draws
