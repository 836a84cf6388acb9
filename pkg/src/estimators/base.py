"""
Base class for local map estimators and the local average they share.

Rectangle cells use the half-open convention (lower, upper] on every
coordinate, closed at the lower face of the root cube so that [0,1]^d is
tiled exactly. Balls are closed.
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Union

import numpy as np

from errors import MapForgeError, ParameterRangeError
from generators.sample_generator import Dataset
from geometry import Ball, HyperRectangle

Cell = Union[HyperRectangle, Ball]

ROOT_LOWER = 0.0
ROOT_UPPER = 1.0


def cell_mask(cell: Cell, X: np.ndarray) -> np.ndarray:
    """Boolean mask of the rows of X that fall in the cell."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if isinstance(cell, Ball):
        dist = np.sqrt(((X - np.asarray(cell.center)) ** 2).sum(axis=1))
        return dist <= cell.radius
    lower = cell.lower_array
    upper = cell.upper_array
    above = (X > lower) | ((X == lower) & (lower <= ROOT_LOWER))
    return np.all(above & (X <= upper), axis=1)


def local_mean(ds: Dataset, cell: Cell, x=None) -> float:
    """
    Average response over the sample points in the cell, 0 for an empty cell.

    ``x`` is the query the cell was built for; it only documents the call.
    """
    mask = cell_mask(cell, ds.X)
    if not mask.any():
        return 0.0
    return float(ds.Y[mask].mean())


def check_in_cube(X: np.ndarray, d: int) -> np.ndarray:
    """Validate query points against [0,1]^d."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != d:
        raise ParameterRangeError(f"query dimension {X.shape[1]} does not match model dimension {d}")
    if np.any(X < ROOT_LOWER) or np.any(X > ROOT_UPPER) or not np.all(np.isfinite(X)):
        raise ParameterRangeError("query point outside [0,1]^d")
    return X


class LocalMapEstimator(ABC):
    """
    Abstract local map estimator.

    Subclasses map each query point x to a cell V(x) and predict the average
    response of the sample points inside it (0 for an empty cell).
    """

    NAME: str = ""

    def __init__(self):
        self._dataset: Optional[Dataset] = None

    @property
    def dataset(self) -> Dataset:
        if self._dataset is None:
            raise MapForgeError(f"{self.NAME} estimator used before fit()")
        return self._dataset

    def check_fitted(self) -> Dataset:
        return self.dataset

    @property
    def is_fitted(self) -> bool:
        return self._dataset is not None

    @abstractmethod
    def fit(self, ds: Dataset) -> "LocalMapEstimator":
        pass

    @abstractmethod
    def locate(self, x) -> Cell:
        """Return the cell V(x)."""
        pass

    @abstractmethod
    def predict(self, X) -> np.ndarray:
        """Vectorized estimate at each row of X."""
        pass

    @abstractmethod
    def local_counts(self, X) -> np.ndarray:
        """Number of sample points in V(x) for each row of X."""
        pass

    @abstractmethod
    def local_diameters(self, X) -> np.ndarray:
        """Diameter of V(x) for each row of X."""
        pass

    @abstractmethod
    def params(self) -> Dict[str, Any]:
        """Constructor parameters, for serialization."""
        pass

    def predict_one(self, x) -> float:
        return float(self.predict(np.atleast_2d(np.asarray(x, dtype=float)))[0])

    def to_dict(self) -> Dict[str, Any]:
        """Model description without the data; see formatters.json_formatter for the file layout."""
        return {"estimator": self.NAME, "params": self.params(), "d": self.dataset.d}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any], ds: Dataset) -> "LocalMapEstimator":
        return cls(**payload.get("params", {})).fit(ds)
