"""
CSV persistence for regression samples and raw replicate statistics.

Sample files carry a header ``x1,...,xd,y`` and floats written with 17
significant digits, which round-trips IEEE doubles exactly.
"""
import csv
import os
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from errors import DatasetFormatError
from generators.sample_generator import Dataset

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def covariate_names(d: int) -> List[str]:
    return [f"x{k + 1}" for k in range(d)]


def save_csv(ds: Dataset, path: PathLike) -> Path:
    """Write the sample to ``path`` and return the path."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        os.makedirs(path.parent, exist_ok=True)
    header = covariate_names(ds.d) + ["y"]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row, y in zip(ds.X, ds.Y):
            writer.writerow([format_float(v) for v in row] + [format_float(y)])
    return path


def _parse_rows(rows: List[List[str]], width: int, path: PathLike) -> np.ndarray:
    values = np.empty((len(rows), width), dtype=float)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DatasetFormatError(
                f"{path}: row {i + 2} has {len(row)} columns, expected {width} (dimension mismatch)"
            )
        try:
            values[i] = [float(v) for v in row]
        except ValueError as e:
            raise DatasetFormatError(f"{path}: malformed value on row {i + 2}: {e}") from e
    if not np.all(np.isfinite(values)):
        raise DatasetFormatError(f"{path}: NaN or infinite value")
    return values


def _check_header(header: List[str], expected: List[str], path: PathLike) -> None:
    names = [name.strip() for name in header]
    if names != expected:
        raise DatasetFormatError(
            f"{path}: header {','.join(names)} does not match expected columns {','.join(expected)}"
        )


def load_csv(path: PathLike, d: int) -> Dataset:
    """
    Read a sample written by save_csv.

    Args:
        path: CSV file with header x1..xd,y
        d: Declared covariate dimension

    Raises:
        DatasetFormatError: empty file, dimension mismatch, misnamed or
            reordered header, malformed or NaN values
    """
    with open(path, "r", newline="", encoding="utf-8") as f:
        rows = [row for row in csv.reader(f) if row]
    if not rows:
        raise DatasetFormatError(f"{path}: n ≥ 1 required, file is empty")
    header, body = rows[0], rows[1:]
    if len(header) != d + 1:
        raise DatasetFormatError(
            f"{path}: header has {len(header)} columns, declared d={d} needs {d + 1} (dimension mismatch)"
        )
    _check_header(header, covariate_names(d) + ["y"], path)
    if not body:
        raise DatasetFormatError(f"{path}: n ≥ 1 required, file has a header but no rows")
    values = _parse_rows(body, d + 1, path)
    return Dataset(values[:, :d], values[:, d])


def load_queries(path: PathLike, d: int) -> np.ndarray:
    """Query points: header x1..xd, optionally followed by a y column that is ignored."""
    with open(path, "r", newline="", encoding="utf-8") as f:
        rows = [row for row in csv.reader(f) if row]
    if len(rows) < 2:
        raise DatasetFormatError(f"{path}: at least one query row required")
    width = len(rows[0])
    if width not in (d, d + 1):
        raise DatasetFormatError(f"{path}: expected {d} or {d + 1} columns, found {width} (dimension mismatch)")
    _check_header(rows[0], covariate_names(d) + ["y"] * (width - d), path)
    return _parse_rows(rows[1:], width, path)[:, :d]


def save_predictions(X: np.ndarray, predictions: Sequence[float], path: PathLike) -> Path:
    path = Path(path)
    d = X.shape[1]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(covariate_names(d) + ["prediction"])
        for row, p in zip(X, predictions):
            writer.writerow([format_float(v) for v in row] + [format_float(p)])
    return path


def save_raw_rows(rows: Iterable[Tuple[str, int, float]], path: PathLike) -> Path:
    """Write (result name, replicate, statistic) rows behind ``--raw``."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["result", "replicate", "statistic"])
        for name, replicate, statistic in rows:
            writer.writerow([name, replicate, format_float(statistic)])
    return path
