"""
JSON persistence for fitted models, partition trees and reports.

Documents are written canonically (sorted keys, fixed indentation, trailing
newline) so identical content gives identical bytes.
"""
import json
from pathlib import Path
from typing import Any, Dict, Union

from errors import DatasetFormatError
from estimators import EstimatorFactory, LocalMapEstimator, PartitionTree
from generators.sample_generator import Dataset

PathLike = Union[str, Path]

MODEL_SCHEMA_VERSION = 1


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(payload: Any, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(payload))
    return path


def read_json(path: PathLike) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise DatasetFormatError(f"{path}: invalid JSON: {e}") from e


def model_to_dict(estimator: LocalMapEstimator) -> Dict[str, Any]:
    """Estimator description plus the sample it was fitted on."""
    ds = estimator.dataset
    payload = estimator.to_dict()
    payload["schema_version"] = MODEL_SCHEMA_VERSION
    payload["data"] = {"X": ds.X.tolist(), "Y": ds.Y.tolist()}
    return payload


def save_model(estimator: LocalMapEstimator, path: PathLike) -> Path:
    return write_json(model_to_dict(estimator), path)


def load_model(path: PathLike) -> LocalMapEstimator:
    """
    Rebuild a fitted estimator from a model file.

    Raises:
        DatasetFormatError: missing fields or unsupported schema version
        KeyError: unknown estimator name
    """
    payload = read_json(path)
    if payload.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise DatasetFormatError(f"{path}: unsupported model schema version {payload.get('schema_version')}")
    try:
        data = payload["data"]
        ds = Dataset(data["X"], data["Y"])
        name = payload["estimator"]
    except (KeyError, TypeError) as e:
        raise DatasetFormatError(f"{path}: malformed model file: {e}") from e
    return EstimatorFactory.get_class(name).from_dict(payload, ds)


def load_partition_tree(path: PathLike) -> PartitionTree:
    """Tree from a cart model file or from a bare tree document."""
    payload = read_json(path)
    if "tree" in payload:
        return PartitionTree.from_dict(payload["tree"])
    if "lower" in payload and "split" in payload:
        return PartitionTree.from_dict(payload)
    raise DatasetFormatError(f"{path}: no partition tree found (expected a cart model or a tree document)")
