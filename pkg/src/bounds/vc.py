"""
Finite set classes, shattering coefficients and brute-force VC dimension.

A FiniteSetClass is represented by its membership matrix on a point set:
row ``j`` is the indicator of set ``j`` evaluated on every point. All pattern
counting goes through that matrix, so the classes below only differ in how
they build it.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from errors import DegenerateCellError, ParameterRangeError

logger = logging.getLogger(__name__)

MAX_BRUTEFORCE_POINTS = 8

MembershipFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FiniteSetClass:
    """
    Deterministic finite family of subsets of R^d.

    Attributes:
        name: Human readable label
        d: Ambient dimension
        size: Number of sets in the family (the empty set included)
        membership: Maps an (n, d) point array to a (size, n) boolean matrix
    """
    name: str
    d: int
    size: int
    membership: MembershipFn

    def patterns(self, points: np.ndarray) -> np.ndarray:
        points = _as_points(points, self.d)
        matrix = np.asarray(self.membership(points), dtype=bool)
        if matrix.shape != (self.size, points.shape[0]):
            raise ValueError(
                f"membership of '{self.name}' returned shape {matrix.shape}, "
                f"expected {(self.size, points.shape[0])}"
            )
        return matrix


def _as_points(points, d: int) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if d == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise ValueError(f"points must have shape (n, {d}), got {arr.shape}")
    return arr


def intervals_on_grid(grid: Sequence[float]) -> FiniteSetClass:
    """Half-open intervals (s, t] with s < t on the grid, plus the empty set."""
    g = np.unique(np.asarray(grid, dtype=float))
    pairs = np.array([(s, t) for s, t in itertools.combinations(g, 2)], dtype=float).reshape(-1, 2)

    def membership(points: np.ndarray) -> np.ndarray:
        x = points[:, 0]
        inside = (x[None, :] > pairs[:, :1]) & (x[None, :] <= pairs[:, 1:])
        return np.vstack([np.zeros((1, x.size), dtype=bool), inside])

    return FiniteSetClass("intervals", 1, len(pairs) + 1, membership)


def rectangles_on_grid(grid: Sequence[float], d: int) -> FiniteSetClass:
    """Boxes whose per-axis bounds (s_k, t_k] come from the grid, plus the empty set."""
    g = np.unique(np.asarray(grid, dtype=float))
    axis_pairs = [(s, t) for s, t in itertools.combinations(g, 2)]
    boxes = np.array(list(itertools.product(axis_pairs, repeat=d)), dtype=float).reshape(-1, d, 2)
    lows, highs = boxes[:, :, 0], boxes[:, :, 1]

    def membership(points: np.ndarray) -> np.ndarray:
        above = points[None, :, :] > lows[:, None, :]
        below = points[None, :, :] <= highs[:, None, :]
        inside = np.all(above & below, axis=2)
        return np.vstack([np.zeros((1, points.shape[0]), dtype=bool), inside])

    return FiniteSetClass(f"rectangles-d{d}", d, len(boxes) + 1, membership)


def rectangles_from_boxes(lows: np.ndarray, highs: np.ndarray) -> FiniteSetClass:
    """Class made of explicitly listed boxes (s_k, t_k], plus the empty set."""
    lows = np.atleast_2d(np.asarray(lows, dtype=float))
    highs = np.atleast_2d(np.asarray(highs, dtype=float))
    if lows.shape != highs.shape:
        raise ValueError("lows and highs must have the same shape")
    d = lows.shape[1]

    def membership(points: np.ndarray) -> np.ndarray:
        inside = np.all(
            (points[None, :, :] > lows[:, None, :]) & (points[None, :, :] <= highs[:, None, :]),
            axis=2,
        )
        return np.vstack([np.zeros((1, points.shape[0]), dtype=bool), inside])

    return FiniteSetClass(f"boxes-{len(lows)}", d, len(lows) + 1, membership)


def balls_on_grid(centers: Sequence[Sequence[float]], radii: Sequence[float]) -> FiniteSetClass:
    """Closed balls with the given centers and radii, plus the empty set."""
    c = np.atleast_2d(np.asarray(centers, dtype=float))
    r = np.asarray(radii, dtype=float)
    if np.any(r < 0):
        raise ParameterRangeError("radii must be nonnegative")
    d = c.shape[1]

    def membership(points: np.ndarray) -> np.ndarray:
        dist = np.sqrt(((points[None, :, :] - c[:, None, :]) ** 2).sum(axis=2))
        inside = dist[:, None, :] <= r[None, :, None]
        inside = inside.reshape(-1, points.shape[0])
        return np.vstack([np.zeros((1, points.shape[0]), dtype=bool), inside])

    return FiniteSetClass(f"balls-d{d}", d, len(c) * len(r) + 1, membership)


def count_patterns(matrix: np.ndarray) -> int:
    """Number of distinct rows of a (sets, points) membership matrix."""
    if matrix.shape[1] == 0:
        return 1
    packed = np.packbits(matrix, axis=1)
    return int(np.unique(packed, axis=0).shape[0])


def shatter_count(set_class: FiniteSetClass, points) -> int:
    """
    Number of distinct membership patterns the class realizes on the points.

    Raises:
        DegenerateCellError: if two points coincide
    """
    pts = _as_points(points, set_class.d)
    if np.unique(pts, axis=0).shape[0] != pts.shape[0]:
        raise DegenerateCellError("shatter_count requires distinct points, found duplicates")
    return count_patterns(set_class.patterns(pts))


def vc_dim_bruteforce(set_class: FiniteSetClass, candidate_points, max_n: int) -> int:
    """
    Largest n <= max_n such that some n-subset of the candidates is shattered.

    The search stops at the first size with no shattered subset, since every
    subset of a shattered set is shattered.
    """
    if not 1 <= max_n <= MAX_BRUTEFORCE_POINTS:
        raise ParameterRangeError(f"max_n must lie in 1..{MAX_BRUTEFORCE_POINTS}, got {max_n}")
    pts = _as_points(candidate_points, set_class.d)
    if np.unique(pts, axis=0).shape[0] != pts.shape[0]:
        raise DegenerateCellError("candidate pool contains duplicate points")
    matrix = set_class.patterns(pts)

    best = 0
    for n in range(1, min(max_n, pts.shape[0]) + 1):
        target = 2 ** n
        if set_class.size < target:
            break
        shattered = any(
            count_patterns(matrix[:, list(subset)]) == target
            for subset in itertools.combinations(range(pts.shape[0]), n)
        )
        if not shattered:
            break
        best = n
    logger.debug("VC search on %s over %d candidates: %d", set_class.name, pts.shape[0], best)
    return best


def log_sauer(n: int, v: int) -> float:
    """v * log(n + 1)"""
    if n < 1 or v < 1:
        raise ParameterRangeError(f"n and v must be >= 1, got n={n}, v={v}")
    return v * math.log(n + 1)


def sauer_bound(n: int, v: int) -> float:
    """(n + 1)^v as a float; inf when it does not fit in a double."""
    log_value = log_sauer(n, v)
    try:
        return float((n + 1) ** v)
    except OverflowError:
        logger.debug("sauer_bound(%d, %d) overflows, log value %.6g", n, v, log_value)
        return math.inf


def sauer_binomial_sum(n: int, v: int) -> int:
    """Sauer's lemma in binomial form, sum_{i <= v} C(n, i)."""
    if n < 1 or v < 1:
        raise ParameterRangeError(f"n and v must be >= 1, got n={n}, v={v}")
    return sum(math.comb(n, i) for i in range(0, min(n, v) + 1))
