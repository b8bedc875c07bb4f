"""
Saved model artifacts (JSON).
Floats are written with Python's shortest round-trip repr.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from cli.outputs import dumps, write_text
from errors import DataError
from regression import CoefficientVector, FittedModel, ModelSpec, RegressionData, evaluate_model

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelArtifact:
    spec: ModelSpec
    coef: CoefficientVector
    loglik: float
    converged: bool
    iterations: int
    n: int
    std_errors: Optional[np.ndarray] = None
    data_path: str = ""
    data_sha256: str = ""

    @classmethod
    def from_fit(cls, fit: FittedModel, data_path: str = "", data_sha256: str = "") -> "ModelArtifact":
        return cls(fit.spec, fit.coef, fit.loglik, fit.converged, fit.iterations, fit.n,
                   fit.std_errors, data_path, data_sha256)

    def evaluate(self, data: RegressionData) -> FittedModel:
        """The stored model evaluated on data."""
        return evaluate_model(self.spec, self.coef, data, converged=self.converged,
                              iterations=self.iterations, std_errors=self.std_errors)

    def to_dict(self) -> dict:
        ses = None
        if self.std_errors is not None:
            ses = [None if not math.isfinite(se) else float(se) for se in self.std_errors]
        return {
            "format_version": FORMAT_VERSION,
            "spec": self.spec.to_dict(),
            "labels": [list(label) for label in self.spec.labels()],
            "coefficients": [float(v) for v in self.coef.flat()],
            "std_errors": ses,
            "loglik": float(self.loglik),
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "n": int(self.n),
            "data": {"path": self.data_path, "sha256": self.data_sha256},
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ModelArtifact":
        version = raw.get("format_version")
        if version != FORMAT_VERSION:
            raise DataError(f"unsupported model artifact version {version!r}")
        try:
            spec = ModelSpec.from_dict(raw["spec"])
            ses = raw.get("std_errors")
            return cls(
                spec=spec,
                coef=CoefficientVector.from_flat(spec, np.asarray(raw["coefficients"], dtype=float)),
                loglik=float(raw["loglik"]),
                converged=bool(raw["converged"]),
                iterations=int(raw.get("iterations", 0)),
                n=int(raw["n"]),
                std_errors=None if ses is None else np.array([np.nan if v is None else v for v in ses], dtype=float),
                data_path=raw.get("data", {}).get("path", ""),
                data_sha256=raw.get("data", {}).get("sha256", ""),
            )
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed model artifact: {exc}")


def save_artifact(artifact: ModelArtifact, path: Union[str, Path]) -> None:
    write_text(path, dumps(artifact.to_dict(), indent=2) + "\n")


def load_artifact(path: Union[str, Path]) -> ModelArtifact:
    try:
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not valid JSON: {exc}")
    return ModelArtifact.from_dict(raw)
