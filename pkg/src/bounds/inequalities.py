"""
Numeric evaluators for the local-average deviation bounds.

Every formula is evaluated in log space: (n+1)^v overflows a double long
before the bounds stop being informative.
"""
import math
from dataclasses import asdict, dataclass
from typing import Optional

from errors import DegenerateCellError, EmptyCellError, ParameterRangeError


@dataclass(frozen=True)
class BoundSpec:
    """
    Constants shared by the deviation bounds.

    Attributes:
        n: Sample size
        delta: Confidence level in (0, 1)
        v: VC dimension of the class the local maps take values in
        sigma2: Sub-Gaussian noise parameter
        kappa: Minimal-mass constant
        density_floor: Lower bound b (or the value f_X(x) at the query point)
        lipschitz: Lipschitz constant L of the regression function
        m_or_k: Leaf size m or neighbor count k, when relevant
        d: Ambient dimension, when relevant
    """
    n: int
    delta: float
    v: int
    sigma2: float = 1.0
    kappa: float = 1.0
    density_floor: float = 1.0
    lipschitz: float = 0.0
    m_or_k: Optional[int] = None
    d: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise ParameterRangeError(f"n must be >= 1, got {self.n}")
        if not 0.0 < self.delta < 1.0:
            raise ParameterRangeError(f"delta must lie in (0, 1), got {self.delta}")
        if self.v < 1:
            raise ParameterRangeError(f"v must be >= 1, got {self.v}")
        if self.sigma2 < 0:
            raise ParameterRangeError(f"sigma2 must be >= 0, got {self.sigma2}")
        if self.kappa <= 0 or self.density_floor <= 0:
            raise ParameterRangeError("kappa and density_floor must be > 0")
        if self.lipschitz < 0:
            raise ParameterRangeError(f"lipschitz must be >= 0, got {self.lipschitz}")
        if self.m_or_k is not None and self.m_or_k < 1:
            raise ParameterRangeError(f"m_or_k must be >= 1, got {self.m_or_k}")
        if self.d is not None and self.d < 1:
            raise ParameterRangeError(f"d must be >= 1, got {self.d}")

    def require_delta_below(self, limit: float) -> None:
        if self.delta >= limit:
            raise ParameterRangeError(f"delta must be < {limit:.6g} for this bound, got {self.delta}")

    def require_d(self) -> int:
        if self.d is None:
            raise ParameterRangeError("this bound needs the dimension d")
        return self.d

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MassBounds:
    """Envelopes for the empirical mass of a set of true mass p"""
    lower: float
    upper: float
    chernoff_lower: float
    chernoff_upper: float

    def to_dict(self) -> dict:
        return asdict(self)


def _log_confidence(n: int, v: int, delta: float) -> float:
    """log((n+1)^v / delta)"""
    return v * math.log(n + 1) - math.log(delta)


def variance_term(spec: BoundSpec, local_count: int) -> float:
    """sqrt(2 sigma^2 log((n+1)^v / delta) / local_count)"""
    if local_count < 1:
        raise EmptyCellError("empty cell: the variance envelope needs at least one point")
    return math.sqrt(2.0 * spec.sigma2 * _log_confidence(spec.n, spec.v, spec.delta) / local_count)


def pointwise_bound(
    spec: BoundSpec,
    local_count: int,
    cell_diameter: float,
    local_lipschitz: Optional[float] = None,
) -> float:
    """Variance envelope plus the bias term L(V) * diam(V); holds with probability 1 - 2 delta."""
    spec.require_delta_below(0.5)
    lip = spec.lipschitz if local_lipschitz is None else local_lipschitz
    return variance_term(spec, local_count) + lip * cell_diameter


def large_sample_threshold(n: int, v: int, delta: float) -> float:
    """8 log(4 (2n+1)^v / delta): the mass n * P(V) a (delta, n)-large map must carry."""
    _check_basic(n, v, delta)
    return 8.0 * (math.log(4.0) + v * math.log(2 * n + 1) - math.log(delta))


def cart_min_leaf_threshold(n: int, d: int, delta: float) -> float:
    """4 log(4 (2n+1)^(2d) / delta): smallest leaf size m the tree bound allows."""
    _check_basic(n, 2 * d, delta)
    return 4.0 * (math.log(4.0) + 2 * d * math.log(2 * n + 1) - math.log(delta))


def knn_min_neighbors_threshold(n: int, d: int, delta: float) -> float:
    """8 log(4 (2n+1)^(d+1) / delta): smallest k the nearest-neighbor bound allows."""
    return large_sample_threshold(n, d + 1, delta)


def is_large(n: int, v: int, delta: float, empirical_mass: float, true_mass: float = 0.0) -> bool:
    """True when n * max(P_n(V), P(V)) reaches the large-sample threshold."""
    return n * max(empirical_mass, true_mass) >= large_sample_threshold(n, v, delta)


def empirical_mass_bounds(n: int, p: float, delta: float, shatter_log: float) -> MassBounds:
    """
    Lower envelope of P_n(A) from the normalized Vapnik inequality, and the
    multiplicative Chernoff pair. Negative lower envelopes are clamped at 0.

    Args:
        n: Sample size
        p: True mass P(A) in (0, 1]
        delta: Confidence in (0, 1)
        shatter_log: log S(2n) of the class the set belongs to

    Returns:
        MassBounds with ``lower`` (Vapnik) and ``upper`` (Chernoff, c=3)
    """
    if not 0.0 < p <= 1.0:
        raise ParameterRangeError(f"p must lie in (0, 1], got {p}")
    _check_basic(n, 1, delta)
    if shatter_log < 0:
        raise ParameterRangeError(f"shatter_log must be >= 0, got {shatter_log}")
    np_ = n * p
    vapnik = p * (1.0 - math.sqrt(4.0 * (shatter_log + math.log(4.0 / delta)) / np_))
    log_inv = math.log(1.0 / delta)
    chernoff_lower = p * (1.0 - math.sqrt(2.0 * log_inv / np_))
    chernoff_upper = p * (1.0 + math.sqrt(3.0 * log_inv / np_))
    return MassBounds(
        lower=max(0.0, vapnik),
        upper=chernoff_upper,
        chernoff_lower=max(0.0, chernoff_lower),
        chernoff_upper=chernoff_upper,
    )


def vapnik_mass_upper(n: int, empirical_mass: float, delta: float, shatter_log_2n: float) -> float:
    """P(A) <= 4/n log(4 S(2n) / delta) + 2 P_n(A)."""
    _check_basic(n, 1, delta)
    if not 0.0 <= empirical_mass <= 1.0:
        raise ParameterRangeError(f"empirical_mass must lie in [0, 1], got {empirical_mass}")
    return 4.0 / n * (math.log(4.0) + shatter_log_2n - math.log(delta)) + 2.0 * empirical_mass


def sup_statistic_bound(sigma2: float, log_shatter: float, delta: float) -> float:
    """sqrt(2 sigma^2 log(S / delta)) for the normalized noise supremum over a class."""
    if not 0.0 < delta < 1.0:
        raise ParameterRangeError(f"delta must lie in (0, 1), got {delta}")
    if sigma2 < 0 or log_shatter < 0:
        raise ParameterRangeError("sigma2 and log_shatter must be >= 0")
    return math.sqrt(2.0 * sigma2 * (log_shatter - math.log(delta)))


def volume_bound(
    spec: BoundSpec,
    density: float,
    cell_volume: float,
    cell_diameter: float,
    local_lipschitz: Optional[float] = None,
) -> float:
    """
    Bound through the cell volume under the minimal-mass assumption:
    sqrt(3 sigma^2 log((n+1)^v / delta) / (n kappa f lambda(V))) + L(V) diam(V).
    Holds with probability 1 - 3 delta for delta < 1/3.
    """
    spec.require_delta_below(1.0 / 3.0)
    if cell_volume <= 0:
        raise DegenerateCellError("degenerate set: volume must be positive")
    if density <= 0:
        raise ParameterRangeError(f"density must be > 0, got {density}")
    lip = spec.lipschitz if local_lipschitz is None else local_lipschitz
    log_conf = _log_confidence(spec.n, spec.v, spec.delta)
    variance = math.sqrt(3.0 * spec.sigma2 * log_conf / (spec.n * spec.kappa * density * cell_volume))
    return variance + lip * cell_diameter


def optimal_rate_bound(spec: BoundSpec, gamma: float) -> float:
    """
    c (log((n+1)^v / delta) / n)^(1/(d+2)) with c = sqrt(3 sigma^2 / (kappa b)) + L gamma^(1/d),
    the rate of a gamma-regular map whose cell volume is tuned to the sample size.
    """
    d = spec.require_d()
    spec.require_delta_below(1.0 / 3.0)
    if gamma <= 0:
        raise ParameterRangeError(f"gamma must be > 0, got {gamma}")
    c = math.sqrt(3.0 * spec.sigma2 / (spec.kappa * spec.density_floor)) + spec.lipschitz * gamma ** (1.0 / d)
    log_conf = _log_confidence(spec.n, spec.v, spec.delta)
    return c * math.exp((math.log(log_conf) - math.log(spec.n)) / (d + 2))


def knn_applicable(spec: BoundSpec, k: int, density: float, t0: float = 1.0) -> bool:
    """k >= 8 log(4 (2n+1)^(d+1) / delta) and 2k <= T0^d n kappa f."""
    d = spec.require_d()
    return (
        k >= knn_min_neighbors_threshold(spec.n, d, spec.delta)
        and 2 * k <= t0 ** d * spec.n * spec.kappa * density
    )


def knn_bound(spec: BoundSpec, k: int, density: float) -> float:
    """
    sqrt(2 sigma^2 log((n+1)^(d+1) / delta) / k) + 2 (2k / (n kappa f))^(1/d) L
    for the k nearest neighbor estimate at a point of density f.
    """
    d = spec.require_d()
    spec.require_delta_below(1.0 / 3.0)
    if not 1 <= k <= spec.n:
        raise ParameterRangeError(f"k must lie in 1..{spec.n}, got {k}")
    if density <= 0:
        raise ParameterRangeError(f"density must be > 0, got {density}")
    variance = math.sqrt(2.0 * spec.sigma2 * _log_confidence(spec.n, d + 1, spec.delta) / k)
    bias = 2.0 * (2.0 * k / (spec.n * spec.kappa * density)) ** (1.0 / d) * spec.lipschitz
    return variance + bias


def cart_bound(spec: BoundSpec, m: int, beta: float, density: float) -> float:
    """
    sqrt(2 sigma^2 log((n+1)^(2d) / delta) / m) + L beta sqrt(d) (5m / (n f kappa))^(1/d)
    for a beta-regular tree whose leaves hold between m and 2m points.
    """
    d = spec.require_d()
    spec.require_delta_below(1.0 / 3.0)
    if not 1 <= m <= spec.n:
        raise ParameterRangeError(f"m must lie in 1..{spec.n}, got {m}")
    if beta < 1:
        raise ParameterRangeError(f"beta must be >= 1, got {beta}")
    if density <= 0:
        raise ParameterRangeError(f"density must be > 0, got {density}")
    variance = math.sqrt(2.0 * spec.sigma2 * _log_confidence(spec.n, 2 * d, spec.delta) / m)
    bias = spec.lipschitz * beta * math.sqrt(d) * (5.0 * m / (spec.n * density * spec.kappa)) ** (1.0 / d)
    return variance + bias


def _check_basic(n: int, v: int, delta: float) -> None:
    if n < 1:
        raise ParameterRangeError(f"n must be >= 1, got {n}")
    if v < 1:
        raise ParameterRangeError(f"v must be >= 1, got {v}")
    if not 0.0 < delta < 1.0:
        raise ParameterRangeError(f"delta must lie in (0, 1), got {delta}")
