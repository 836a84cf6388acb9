"""
Fixed grid partitions of [0,1]^d.

Each coordinate carries its own cut sequence 0 = u_0 < ... < u_N = 1; the
cell of x is the product of the half-open intervals (u_i, u_{i+1}] that
contain its coordinates, closed at 0.
"""
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from errors import ParameterRangeError
from generators.sample_generator import Dataset
from geometry import HyperRectangle

from .base import LocalMapEstimator, check_in_cube
from .factory import EstimatorFactory


class FixedGridMap:
    """Local map induced by a product grid."""

    def __init__(self, cuts: Sequence[Sequence[float]]):
        if len(cuts) < 1:
            raise ParameterRangeError("a grid needs at least one coordinate")
        self.cuts: List[np.ndarray] = []
        for k, c in enumerate(cuts):
            arr = np.asarray(c, dtype=float)
            if arr.ndim != 1 or arr.size < 2:
                raise ParameterRangeError(f"coordinate {k}: need at least two cuts")
            if arr[0] != 0.0 or arr[-1] != 1.0:
                raise ParameterRangeError(f"coordinate {k}: cuts must start at 0 and end at 1")
            if np.any(np.diff(arr) <= 0):
                raise ParameterRangeError(f"coordinate {k}: cuts must be strictly increasing")
            self.cuts.append(arr)

    @property
    def d(self) -> int:
        return len(self.cuts)

    @property
    def shape(self) -> tuple:
        return tuple(c.size - 1 for c in self.cuts)

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.shape))

    def cell_indices(self, X) -> np.ndarray:
        """Per-coordinate cell indices, shape (n, d)."""
        X = check_in_cube(X, self.d)
        out = np.empty(X.shape, dtype=np.int64)
        for k, c in enumerate(self.cuts):
            i = np.searchsorted(c, X[:, k], side='left') - 1
            out[:, k] = np.clip(i, 0, c.size - 2)
        return out

    def flat_indices(self, X) -> np.ndarray:
        return np.ravel_multi_index(self.cell_indices(X).T, self.shape)

    def cell(self, index: Sequence[int]) -> HyperRectangle:
        lower = tuple(float(c[i]) for c, i in zip(self.cuts, index))
        upper = tuple(float(c[i + 1]) for c, i in zip(self.cuts, index))
        return HyperRectangle(lower, upper)

    def locate(self, x) -> HyperRectangle:
        return self.cell(self.cell_indices(x)[0])

    def cells(self) -> List[HyperRectangle]:
        return [self.cell(idx) for idx in np.ndindex(*self.shape)]


def fixed_grid_map(cuts: Sequence[Sequence[float]]) -> FixedGridMap:
    return FixedGridMap(cuts)


def regular_cuts(cells_per_axis: int, d: int) -> List[np.ndarray]:
    """Equally spaced cuts with the same count on every axis."""
    if cells_per_axis < 1:
        raise ParameterRangeError(f"cells_per_axis must be >= 1, got {cells_per_axis}")
    return [np.linspace(0.0, 1.0, cells_per_axis + 1) for _ in range(d)]


@EstimatorFactory.register('grid')
class GridEstimator(LocalMapEstimator):
    """Cell averages over a fixed grid."""

    def __init__(self, cells_per_axis: Optional[int] = None, cuts: Optional[Sequence[Sequence[float]]] = None):
        super().__init__()
        if (cells_per_axis is None) == (cuts is None):
            raise ParameterRangeError("give exactly one of cells_per_axis and cuts")
        self.cells_per_axis = cells_per_axis
        self._cuts = None if cuts is None else [list(map(float, c)) for c in cuts]
        self.grid: Optional[FixedGridMap] = None
        self._means: Optional[np.ndarray] = None
        self._counts: Optional[np.ndarray] = None

    def params(self) -> Dict[str, Any]:
        if self._cuts is not None:
            return {"cuts": self._cuts}
        return {"cells_per_axis": self.cells_per_axis}

    def fit(self, ds: Dataset) -> "GridEstimator":
        cuts = self._cuts if self._cuts is not None else regular_cuts(self.cells_per_axis, ds.d)
        self.grid = FixedGridMap(cuts)
        if self.grid.d != ds.d:
            raise ParameterRangeError(f"grid has d={self.grid.d} but data has d={ds.d}")
        flat = self.grid.flat_indices(ds.X)
        counts = np.bincount(flat, minlength=self.grid.n_cells)
        sums = np.bincount(flat, weights=ds.Y, minlength=self.grid.n_cells)
        self._counts = counts
        self._means = np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)
        self._dataset = ds
        return self

    def locate(self, x) -> HyperRectangle:
        self.check_fitted()
        return self.grid.locate(x)

    def local_counts(self, X) -> np.ndarray:
        self.check_fitted()
        return self._counts[self.grid.flat_indices(X)]

    def local_diameters(self, X) -> np.ndarray:
        self.check_fitted()
        idx = self.grid.cell_indices(X)
        widths = np.stack([np.diff(c)[idx[:, k]] for k, c in enumerate(self.grid.cuts)], axis=1)
        return np.sqrt((widths ** 2).sum(axis=1))

    def predict(self, X) -> np.ndarray:
        self.check_fitted()
        return self._means[self.grid.flat_indices(X)]
