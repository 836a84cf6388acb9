"""
Axis-aligned cell geometry.

Cells are immutable hyper-rectangles and closed balls. Shape regularity is
tested with a relative tolerance so that ratios sitting exactly on the
threshold are accepted.
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from errors import DegenerateCellError, ParameterRangeError

REL_TOL = 1e-9


@dataclass(frozen=True)
class HyperRectangle:
    """
    Axis-aligned box with per-coordinate bounds ``lower[k] <= upper[k]``.

    ``widths`` holds the side lengths. It defaults to ``upper - lower``;
    generators that shrink a cell many times pass widths tracked as running
    products so that volumes of very small cells keep full relative precision.
    """
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    widths: Optional[Tuple[float, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) == 0 or len(lower) != len(upper):
            raise ValueError(
                f"lower and upper must be non-empty with equal length, got {len(lower)} and {len(upper)}"
            )
        for k, (a, b) in enumerate(zip(lower, upper)):
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ValueError(f"non-finite bound on coordinate {k}")
            if a > b:
                raise ValueError(f"lower[{k}]={a} exceeds upper[{k}]={b}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.widths is None:
            widths = tuple(b - a for a, b in zip(lower, upper))
        else:
            widths = tuple(float(h) for h in self.widths)
            if len(widths) != len(lower) or any(h < 0 for h in widths):
                raise ValueError("widths must be nonnegative with one entry per coordinate")
        object.__setattr__(self, "widths", widths)

    @property
    def d(self) -> int:
        return len(self.lower)

    @property
    def lower_array(self) -> np.ndarray:
        return np.asarray(self.lower, dtype=float)

    @property
    def upper_array(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float)

    @property
    def center(self) -> np.ndarray:
        return (self.lower_array + self.upper_array) / 2.0

    def split(self, p: int, u: float) -> Tuple["HyperRectangle", "HyperRectangle"]:
        """Cut coordinate ``p`` at ``lower + width * u``; returns (left, right)."""
        if not 0 <= p < self.d:
            raise ParameterRangeError(f"split coordinate {p} outside 0..{self.d - 1}")
        if not 0.0 < u < 1.0:
            raise ParameterRangeError(f"split fraction must lie in (0, 1), got {u}")
        a, b = self.lower[p], self.upper[p]
        h = self.widths[p]
        t = a + (b - a) * u
        left_upper = list(self.upper)
        left_upper[p] = t
        right_lower = list(self.lower)
        right_lower[p] = t
        left_widths = list(self.widths)
        left_widths[p] = h * u
        right_widths = list(self.widths)
        right_widths[p] = h * (1.0 - u)
        left = HyperRectangle(self.lower, tuple(left_upper), tuple(left_widths))
        right = HyperRectangle(tuple(right_lower), self.upper, tuple(right_widths))
        return left, right

    def to_dict(self) -> dict:
        return {"lower": list(self.lower), "upper": list(self.upper)}


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball"""
    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        if not self.radius >= 0:
            raise ValueError(f"radius must be nonnegative, got {self.radius}")

    @property
    def d(self) -> int:
        return len(self.center)

    def diameter(self) -> float:
        return 2.0 * self.radius

    def volume(self) -> float:
        d = self.d
        return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * self.radius ** d

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class ShapeParams:
    """Shape-regularity constants for a given dimension"""
    beta: float
    gamma: float
    d: int

    def __post_init__(self):
        if self.beta < 1:
            raise ParameterRangeError(f"beta must be >= 1, got {self.beta}")
        if self.gamma <= 0:
            raise ParameterRangeError(f"gamma must be > 0, got {self.gamma}")
        if self.d < 1:
            raise ParameterRangeError(f"d must be >= 1, got {self.d}")

    @classmethod
    def from_beta(cls, beta: float, d: int) -> "ShapeParams":
        return cls(beta=beta, gamma=beta_to_gamma(beta, d), d=d)


def unit_cube(d: int) -> HyperRectangle:
    """[0, 1]^d"""
    if d < 1:
        raise ParameterRangeError(f"d must be >= 1, got {d}")
    return HyperRectangle((0.0,) * d, (1.0,) * d)


def diameter(cell: HyperRectangle) -> float:
    """Euclidean diameter sqrt(sum h_k^2)."""
    return math.hypot(*cell.widths)


def volume(cell: HyperRectangle) -> float:
    return math.prod(cell.widths)


def side_extremes(cell: HyperRectangle) -> Tuple[float, float]:
    """Return (smallest side, largest side)."""
    return min(cell.widths), max(cell.widths)


def is_beta_sr(cell: HyperRectangle, beta: float) -> bool:
    """
    True when the largest side is at most ``beta`` times the smallest.

    Raises:
        ParameterRangeError: beta < 1
        DegenerateCellError: a zero side next to a positive one
    """
    if beta < 1:
        raise ParameterRangeError(f"beta must be >= 1, got {beta}")
    h_minus, h_plus = side_extremes(cell)
    if h_minus <= 0:
        if h_plus > 0:
            raise DegenerateCellError("degenerate cell: zero side length next to a positive one")
        raise DegenerateCellError("degenerate cell: all side lengths are zero")
    return h_plus <= beta * h_minus * (1.0 + REL_TOL)


def is_gamma_sr(set_diameter: float, set_volume: float, d: int, gamma: float) -> bool:
    """True when diameter^d <= gamma * volume, up to the relative tolerance."""
    if set_volume <= 0:
        raise DegenerateCellError("degenerate set: volume must be positive")
    if set_diameter < 0:
        raise ParameterRangeError(f"diameter must be nonnegative, got {set_diameter}")
    if gamma <= 0:
        raise ParameterRangeError(f"gamma must be > 0, got {gamma}")
    # log space keeps large d away from overflow
    if set_diameter == 0:
        return True
    lhs = d * math.log(set_diameter)
    rhs = math.log(gamma) + math.log(set_volume) + math.log1p(REL_TOL)
    return lhs <= rhs


def beta_to_gamma(beta: float, d: int) -> float:
    """A beta-regular rectangle is gamma-regular with gamma = beta^d d^(d/2)."""
    if beta < 1:
        raise ParameterRangeError(f"beta must be >= 1, got {beta}")
    if d < 1:
        raise ParameterRangeError(f"d must be >= 1, got {d}")
    return beta ** d * d ** (d / 2)


def gamma_to_beta(gamma: float) -> float:
    """A gamma-regular rectangle is beta-regular with beta = gamma."""
    if gamma <= 0:
        raise ParameterRangeError(f"gamma must be > 0, got {gamma}")
    return gamma


def shape_ratio(cell: HyperRectangle) -> float:
    """h_+ / h_- of a non-degenerate cell."""
    h_minus, h_plus = side_extremes(cell)
    if h_minus <= 0:
        raise DegenerateCellError("degenerate cell: shape ratio needs positive sides")
    return h_plus / h_minus


def gamma_ratio(cell: HyperRectangle) -> float:
    """diam^d / volume, the smallest gamma for which the cell is gamma-regular."""
    vol = volume(cell)
    if vol <= 0:
        raise DegenerateCellError("degenerate set: volume must be positive")
    return math.exp(cell.d * math.log(diameter(cell)) - math.log(vol))

