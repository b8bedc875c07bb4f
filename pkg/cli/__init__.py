from cli.data import Dataset, file_sha256, load_dataset, preprocess_zeros
from cli.outputs import CSV_VERSION, atomic_path, read_table, write_table
from cli.artifact import FORMAT_VERSION, ModelArtifact, load_artifact, save_artifact
from cli.commands import build_parser, run

__all__ = [
    "Dataset",
    "file_sha256",
    "load_dataset",
    "preprocess_zeros",
    "CSV_VERSION",
    "atomic_path",
    "read_table",
    "write_table",
    "FORMAT_VERSION",
    "ModelArtifact",
    "load_artifact",
    "save_artifact",
    "build_parser",
    "run",
]
