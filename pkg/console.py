"""
Progress output.
Status lines go to stderr so stdout only carries results.
"""

import sys

from config import config


def status(tag: str, message: str) -> None:
    """Print a `[Tag] message` progress line when verbose output is on."""
    if config.VERBOSE:
        print(f"[{tag}] {message}", file=sys.stderr, flush=True)
