"""
k nearest neighbor local maps.

V(x) is the closed ball around x whose radius is the distance to the k-th
nearest sample point. Ties at that radius are broken by ascending sample
index so that exactly k points are averaged.
"""
from typing import Any, Dict, Tuple

import numpy as np
from scipy.spatial import cKDTree

from errors import ParameterRangeError
from generators.sample_generator import Dataset
from geometry import Ball

from .base import LocalMapEstimator
from .factory import EstimatorFactory

TIE_TOL = 1e-12


def _check_k(k: int, n: int) -> None:
    if k < 1:
        raise ParameterRangeError(f"k must be >= 1, got {k}")
    if k > n:
        raise ParameterRangeError(f"k > n: k={k} exceeds the sample size n={n}")


def knn_radius(ds: Dataset, x, k: int) -> Tuple[float, np.ndarray]:
    """
    Radius of the k-nearest-neighbor ball and the k selected indices.

    Indices come in order of (distance, index); zero-based.
    """
    _check_k(k, ds.n)
    x = np.asarray(x, dtype=float).reshape(-1)
    dist = np.sqrt(((ds.X - x) ** 2).sum(axis=1))
    order = np.lexsort((np.arange(ds.n), dist))
    idx = order[:k]
    return float(dist[idx[-1]]), idx


def knn_predict(ds: Dataset, x, k: int) -> float:
    """Average response over the k tie-broken nearest neighbors."""
    _, idx = knn_radius(ds, x, k)
    return float(ds.Y[np.sort(idx)].mean())


@EstimatorFactory.register('knn')
class KnnEstimator(LocalMapEstimator):
    """k-NN regression with kd-tree queries and an exact tie fallback."""

    def __init__(self, k: int):
        super().__init__()
        if k < 1:
            raise ParameterRangeError(f"k must be >= 1, got {k}")
        self.k = int(k)
        self._tree = None

    def params(self) -> Dict[str, Any]:
        return {"k": self.k}

    def fit(self, ds: Dataset) -> "KnnEstimator":
        _check_k(self.k, ds.n)
        self._dataset = ds
        self._tree = cKDTree(ds.X)
        return self

    def locate(self, x) -> Ball:
        radius, _ = knn_radius(self.dataset, x, self.k)
        return Ball(tuple(np.asarray(x, dtype=float).reshape(-1)), radius)

    def radii(self, X) -> np.ndarray:
        """Distance from each query to its k-th nearest sample point."""
        self.check_fitted()
        X = np.atleast_2d(np.asarray(X, dtype=float))
        dist, _ = self._tree.query(X, k=[self.k])
        return dist[:, 0]

    def local_counts(self, X) -> np.ndarray:
        return np.full(np.atleast_2d(X).shape[0], self.k)

    def local_diameters(self, X) -> np.ndarray:
        return 2.0 * self.radii(X)

    def predict(self, X) -> np.ndarray:
        ds = self.dataset
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != ds.d:
            raise ParameterRangeError(f"query dimension {X.shape[1]} does not match model dimension {ds.d}")
        k, n = self.k, ds.n
        if k == n:
            return np.full(X.shape[0], float(ds.Y.mean()))

        dist, idx = self._tree.query(X, k=k + 1)
        out = np.empty(X.shape[0])
        kth, next_ = dist[:, k - 1], dist[:, k]
        ambiguous = next_ - kth <= TIE_TOL * (1.0 + kth)
        for row in range(X.shape[0]):
            if ambiguous[row]:
                out[row] = knn_predict(ds, X[row], k)
            else:
                out[row] = ds.Y[np.sort(idx[row, :k])].mean()
        return out
