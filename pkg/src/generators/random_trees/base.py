"""
Base class for purely random trees followed along the path to a query point.

Only the cell containing the query is kept at every step. Side lengths are
tracked as running products of the recorded length reductions, so the cell
volume equals the product of the reductions up to rounding.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from errors import ParameterRangeError
from geometry import HyperRectangle, unit_cube, volume

VOLUME_REL_TOL = 1e-12
COORD_ULPS_PER_SPLIT = 4.0


@dataclass(frozen=True)
class SplitStep:
    """One split on the path: coordinate D (zero-based), fraction S, reduction S_bar."""
    D: int
    S: float
    S_bar: float


@dataclass
class SplitSequence:
    """Randomness of a purely random tree along one path."""
    steps: List[SplitStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def append(self, D: int, S: float, S_bar: float) -> None:
        if not 0.0 < S < 1.0:
            raise ParameterRangeError(f"split fraction must lie in (0, 1), got {S}")
        self.steps.append(SplitStep(int(D), float(S), float(S_bar)))

    def reduction_product(self) -> float:
        return math.prod(step.S_bar for step in self.steps)

    def direction_counts(self, d: int) -> List[int]:
        counts = [0] * d
        for step in self.steps:
            counts[step.D] += 1
        return counts

    def to_dict(self) -> List[Dict[str, Any]]:
        return [
            {"step": i, "D": s.D, "S": s.S, "S_bar": s.S_bar}
            for i, s in enumerate(self.steps)
        ]


def check_query(x, d: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != d:
        raise ParameterRangeError(f"query has dimension {x.size}, expected {d}")
    if np.any(x < 0.0) or np.any(x > 1.0) or not np.all(np.isfinite(x)):
        raise ParameterRangeError("query point outside [0,1]^d")
    return x


def split_towards(cell: HyperRectangle, x: np.ndarray, p: int, u: float) -> Tuple[HyperRectangle, float]:
    """Child of ``cell`` containing x after cutting coordinate p at fraction u, with its reduction."""
    left, right = cell.split(p, u)
    if x[p] <= left.upper[p]:
        return left, u
    return right, 1.0 - u


class BaseRandomTree(ABC):
    """
    Purely random tree: split coordinates and fractions are drawn
    independently of any data.
    """

    KIND: str = ""

    @abstractmethod
    def draw_direction(self, cell: HyperRectangle, rng: np.random.Generator) -> int:
        pass

    @abstractmethod
    def draw_fraction(self, rng: np.random.Generator) -> float:
        pass

    def grow_path(self, x, d: int, N: int, seed: int) -> Tuple[HyperRectangle, SplitSequence]:
        """
        Apply N splits to [0,1]^d, keeping the child that contains x each time.

        A point on a cut belongs to the left child.
        """
        if N < 0:
            raise ParameterRangeError(f"N must be >= 0, got {N}")
        x = check_query(x, d)
        rng = np.random.default_rng(seed)
        cell = unit_cube(d)
        seq = SplitSequence()
        for _ in range(N):
            p = self.draw_direction(cell, rng)
            u = self.draw_fraction(rng)
            cell, s_bar = split_towards(cell, x, p, u)
            seq.append(p, u, s_bar)
        return cell, seq


def open_unit_uniform(rng: np.random.Generator) -> float:
    """Uniform draw on the open interval (0, 1)."""
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return u


def volume_invariance_check(cell: HyperRectangle, seq: SplitSequence) -> bool:
    """
    True iff volume(cell) equals the product of the recorded reductions to
    1e-12 relative, and every tracked side length matches the cell's
    coordinates ``upper - lower``.

    The coordinate comparison is absolute: each split rounds a bound once, so
    the allowance grows by a few ulps of 1 per recorded split.
    """
    coord_tol = COORD_ULPS_PER_SPLIT * (len(seq) + 1) * np.finfo(float).eps
    for a, b, h in zip(cell.lower, cell.upper, cell.widths):
        if abs((b - a) - h) > coord_tol:
            return False
    return math.isclose(volume(cell), seq.reduction_product(), rel_tol=VOLUME_REL_TOL, abs_tol=0.0)
