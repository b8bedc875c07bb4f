"""
Input datasets: CSV ingestion and zero replacement.
"""

import hashlib
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config import config
from console import status
from dirichlet import FILE_SUM_TOL, validate_file_rows
from errors import DataError, DomainError
from regression import RegressionData


@dataclass(frozen=True)
class Dataset:
    """k named proportion columns and the numeric covariate columns of a CSV file."""
    components: Tuple[str, ...]
    y: np.ndarray
    covariates: Dict[str, np.ndarray] = field(default_factory=dict)
    sha256: str = ""

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def k(self) -> int:
        return self.y.shape[1]

    def to_regression_data(self) -> RegressionData:
        return RegressionData(validate_file_rows(self.y), self.covariates)


def file_sha256(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def load_dataset(path: Union[str, Path], components: Sequence[str]) -> Dataset:
    """Read a headed CSV; every numeric non-component column becomes a covariate."""
    try:
        frame = pd.read_csv(path)
    except (pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError, ValueError) as exc:
        raise DataError(f"cannot parse {path}: {exc}")
    components = tuple(c.strip() for c in components)
    if len(components) < 2:
        raise DataError("at least two component columns are required")
    missing = [c for c in components if c not in frame.columns]
    if missing:
        raise DataError(f"component column(s) not found: {', '.join(missing)}")
    for name in components:
        if not pd.api.types.is_numeric_dtype(frame[name]):
            raise DataError(f"component column {name!r} is not numeric")

    y = frame[list(components)].to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(y).all(axis=1))
    if bad.size:
        raise DataError("missing or non-finite component value", row=int(bad[0]))
    covariates = {
        name: frame[name].to_numpy(dtype=float)
        for name in frame.columns
        if name not in components and pd.api.types.is_numeric_dtype(frame[name])
    }
    for name, values in covariates.items():
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise DataError(f"missing or non-finite value in covariate {name!r}", row=int(bad[0]))
    status("Data", f"loaded {len(frame)} rows, {len(components)} components, "
                   f"{len(covariates)} covariate column(s) from {path}")
    return Dataset(components, y, covariates, file_sha256(path))


def preprocess_zeros(data: Dataset, epsilon: Optional[float] = None,
                     max_zero_fraction: Optional[float] = None) -> Dataset:
    """
    Replace zero components by epsilon and renormalize the affected rows.

    Rows without zeros pass through untouched. Fails when more than
    max_zero_fraction of the rows contain a zero.
    """
    epsilon = config.ZERO_EPSILON if epsilon is None else epsilon
    max_zero_fraction = config.MAX_ZERO_FRACTION if max_zero_fraction is None else max_zero_fraction
    if not 0 < epsilon < 1.0 / data.k:
        raise DomainError(f"epsilon must lie in (0, 1/k) = (0, {1.0 / data.k:.4g}), got {epsilon}")

    y = np.array(data.y, dtype=float)
    for i, row in enumerate(y):
        if np.any(row < 0) or np.any(row > 1):
            raise DataError(f"component outside [0, 1]: {row.tolist()}", row=i)
    zero_rows = np.flatnonzero((y == 0).any(axis=1))
    if zero_rows.size == 0:
        return data
    fraction = zero_rows.size / data.n
    if fraction > max_zero_fraction:
        raise DataError(
            f"{zero_rows.size} of {data.n} rows contain zeros ({fraction:.1%} > {max_zero_fraction:.1%}); "
            "zero replacement is only suitable for very few zeros, use a zero-adjusted model"
        )
    for i in zero_rows:
        if abs(y[i].sum() - 1.0) > FILE_SUM_TOL:
            raise DataError(f"components sum to {y[i].sum():.9g}, not 1", row=int(i))
    block = y[zero_rows]
    block[block == 0] = epsilon
    y[zero_rows] = block / block.sum(axis=1, keepdims=True)
    status("Data", f"replaced zeros in {zero_rows.size} row(s) with {epsilon}")
    return replace(data, y=y)
