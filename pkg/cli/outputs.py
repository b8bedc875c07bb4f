"""
Versioned CSV tables and atomic file writes.

Every table starts with two comment lines:
    # compass-csv v1 <table>
    # meta <json>
"""

import contextlib
import json
import os
import tempfile
from pathlib import Path
from typing import Dict, Iterator, Tuple, Union

import numpy as np
import pandas as pd

from errors import DataError

CSV_VERSION = "v1"
CSV_MAGIC = "# compass-csv"
META_PREFIX = "# meta "


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def dumps(obj, **kwargs) -> str:
    return json.dumps(obj, sort_keys=True, default=_json_default, **kwargs)


@contextlib.contextmanager
def atomic_path(path: Union[str, Path]) -> Iterator[Path]:
    """Yield a temporary sibling of path; it replaces path only if the block succeeds."""
    path = Path(path)
    parent = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=parent)
    os.close(fd)
    try:
        yield Path(tmp)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def write_text(path: Union[str, Path], text: str) -> None:
    with atomic_path(path) as tmp:
        tmp.write_text(text, encoding="utf-8")


def write_table(frame: pd.DataFrame, path: Union[str, Path], table: str, meta: Dict) -> None:
    """Write frame under the versioned header, atomically."""
    with atomic_path(path) as tmp:
        with open(tmp, "w", encoding="utf-8", newline="") as f:
            f.write(f"{CSV_MAGIC} {CSV_VERSION} {table}\n")
            f.write(f"{META_PREFIX}{dumps(meta)}\n")
            frame.to_csv(f, index=False, lineterminator="\n")


def read_table(path: Union[str, Path]) -> Tuple[str, Dict, pd.DataFrame]:
    """(table name, metadata, frame); unknown or missing versions are rejected."""
    with open(path, encoding="utf-8") as f:
        header = f.readline().rstrip("\n").split(" ")
        meta_line = f.readline().rstrip("\n")
    if header[:2] != CSV_MAGIC.split(" ") or len(header) != 4:
        raise DataError(f"{path} is not a compass table")
    if header[2] != CSV_VERSION:
        raise DataError(f"{path}: unsupported table version {header[2]!r}")
    if not meta_line.startswith(META_PREFIX):
        raise DataError(f"{path}: missing metadata line")
    try:
        meta = json.loads(meta_line[len(META_PREFIX):])
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: malformed metadata: {exc}")
    return header[3], meta, pd.read_csv(path, skiprows=2)
