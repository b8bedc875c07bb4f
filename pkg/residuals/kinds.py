"""
The six residuals: four bootstrap class residuals and two composites.
"""

from enum import Enum
from typing import Tuple

from errors import UsageError


class ResidualKind(Enum):
    """
    Class residuals combine a multivariate function (absolute | quadratic)
    with a sign function (h1: worst-fitting component, h2: dominant component).
    """
    A1 = "a1"
    Q1 = "q1"
    A2 = "a2"
    Q2 = "q2"
    COMPOSITE_PEARSON = "pearson"
    COMPOSITE_QUANTILE = "compq"

    @property
    def is_class(self) -> bool:
        return self in CLASS_KINDS

    @property
    def function(self) -> str:
        """Multivariate function: 'absolute' or 'quadratic'."""
        return "absolute" if self in (ResidualKind.A1, ResidualKind.A2) else "quadratic"

    @property
    def sign(self) -> int:
        """Sign function number (1 or 2); 0 for composites, which are unsigned."""
        return {ResidualKind.A1: 1, ResidualKind.Q1: 1, ResidualKind.A2: 2, ResidualKind.Q2: 2}.get(self, 0)

    @property
    def label(self) -> str:
        return {
            ResidualKind.COMPOSITE_PEARSON: "r_pearson",
            ResidualKind.COMPOSITE_QUANTILE: "r_quantile",
        }.get(self, f"s_{self.value}")

    @classmethod
    def parse(cls, text: str) -> "ResidualKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            valid = "|".join(k.value for k in cls)
            raise UsageError(f"unknown residual kind {text!r} (expected {valid})")


CLASS_KINDS: Tuple[ResidualKind, ...] = (ResidualKind.A1, ResidualKind.Q1, ResidualKind.A2, ResidualKind.Q2)
COMPOSITE_KINDS: Tuple[ResidualKind, ...] = (ResidualKind.COMPOSITE_PEARSON, ResidualKind.COMPOSITE_QUANTILE)
ALL_KINDS: Tuple[ResidualKind, ...] = CLASS_KINDS + COMPOSITE_KINDS
