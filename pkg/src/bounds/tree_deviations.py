"""
Finite-depth deviation bounds for purely random trees.

Each function returns the event threshold together with the probability
bound attached to it, and refuses parameters outside the range where the
bound is stated.
"""
import math
from dataclasses import asdict, dataclass

from errors import ParameterRangeError


@dataclass(frozen=True)
class DeviationBound:
    """
    Threshold of a tail event and its probability bound.

    ``direction`` tells how a replicate statistic is compared with the
    threshold: ``ge`` for upper tails, ``le`` for lower tails. ``kind`` is
    ``at_most`` when the event probability is bounded above and ``at_least``
    when it is bounded below.
    """
    statistic: str
    direction: str
    threshold: float
    probability: float
    kind: str = "at_most"

    def event(self, value: float) -> bool:
        if self.direction == "ge":
            return value >= self.threshold
        return value <= self.threshold

    def to_dict(self) -> dict:
        return asdict(self)


def _check_depth(d: int, N: int) -> None:
    if d < 1:
        raise ParameterRangeError(f"d must be >= 1, got {d}")
    if N < 0:
        raise ParameterRangeError(f"N must be >= 0, got {N}")


def uniform_diameter_upper(d: int, N: int, beta: float) -> DeviationBound:
    """P(diam >= sqrt(d) e^(-N/d + N beta)) <= d e^(-N d beta^2 / 4), beta >= 0."""
    _check_depth(d, N)
    if beta < 0:
        raise ParameterRangeError(f"beta must be >= 0, got {beta}")
    threshold = math.sqrt(d) * math.exp(-N / d + N * beta)
    probability = min(1.0, d * math.exp(-N * d * beta ** 2 / 4.0))
    return DeviationBound("diameter", "ge", threshold, probability)


def uniform_diameter_lower(d: int, N: int, beta: float) -> DeviationBound:
    """P(diam <= sqrt(d) e^(-N/d - N beta)) <= d e^(-N d beta^2 / 8), beta in (0, 2/d)."""
    _check_depth(d, N)
    if not 0.0 < beta < 2.0 / d:
        raise ParameterRangeError(f"beta must lie in (0, {2.0 / d:.6g}), got {beta}")
    threshold = math.sqrt(d) * math.exp(-N / d - N * beta)
    probability = min(1.0, d * math.exp(-N * d * beta ** 2 / 8.0))
    return DeviationBound("diameter", "le", threshold, probability)


def _volume_tail(N: int, alpha: float) -> float:
    return min(1.0, math.exp(N * (math.log(alpha) + 1.0 - alpha)))


def uniform_volume_lower(N: int, alpha: float) -> DeviationBound:
    """P(volume <= e^(-alpha N)) <= (alpha e^(1-alpha))^N, alpha > 1."""
    _check_depth(1, N)
    if alpha <= 1:
        raise ParameterRangeError(f"alpha must be > 1 for the lower volume tail, got {alpha}")
    return DeviationBound("volume", "le", math.exp(-alpha * N), _volume_tail(N, alpha))


def uniform_volume_upper(N: int, alpha: float) -> DeviationBound:
    """P(volume >= e^(-alpha N)) <= (alpha e^(1-alpha))^N, alpha in (0, 1)."""
    _check_depth(1, N)
    if not 0.0 < alpha < 1.0:
        raise ParameterRangeError(f"alpha must lie in (0, 1) for the upper volume tail, got {alpha}")
    return DeviationBound("volume", "ge", math.exp(-alpha * N), _volume_tail(N, alpha))


def _centered_probability(d: int, N: int, alpha: float) -> float:
    beta = (d - 1) * alpha / (1.0 - alpha)
    log_p = math.log(d) + N * math.log(1.0 - (1.0 - beta) / d) - alpha * N * math.log(beta)
    return min(1.0, math.exp(log_p))


def centered_diameter_upper(d: int, N: int, alpha: float) -> DeviationBound:
    """
    P(diam >= sqrt(d) 2^(-alpha N)) <= d (1 - (1-b)/d)^N b^(-alpha N)
    with b = (d-1) alpha / (1-alpha), for d >= 2 and alpha in (0, 1/d).
    """
    _check_depth(d, N)
    if d < 2:
        raise ParameterRangeError("centered diameter bounds need d >= 2")
    if not 0.0 < alpha < 1.0 / d:
        raise ParameterRangeError(f"alpha must lie in (0, {1.0 / d:.6g}), got {alpha}")
    threshold = math.sqrt(d) * 2.0 ** (-alpha * N)
    return DeviationBound("diameter", "ge", threshold, _centered_probability(d, N, alpha))


def centered_diameter_lower(d: int, N: int, alpha: float) -> DeviationBound:
    """Same probability form as the upper tail, for alpha in (1/d, 1) and the event diam <= threshold."""
    _check_depth(d, N)
    if d < 2:
        raise ParameterRangeError("centered diameter bounds need d >= 2")
    if not 1.0 / d < alpha < 1.0:
        raise ParameterRangeError(f"alpha must lie in ({1.0 / d:.6g}, 1), got {alpha}")
    threshold = math.sqrt(d) * 2.0 ** (-alpha * N)
    return DeviationBound("diameter", "le", threshold, _centered_probability(d, N, alpha))


def centered_volume(N: int, alpha: float) -> DeviationBound:
    """Centered cells have volume exactly 2^(-N); the event volume <= e^(-alpha N) is certain or impossible."""
    _check_depth(1, N)
    if alpha <= 0:
        raise ParameterRangeError(f"alpha must be > 0, got {alpha}")
    threshold = math.exp(-alpha * N)
    certain = -N * math.log(2.0) <= -alpha * N
    return DeviationBound("volume", "le", threshold, 1.0 if certain else 0.0)


def not_shape_regular(kind: str, d: int, N: int) -> DeviationBound:
    """
    Lower bound on P(h_+/h_- >= base^sqrt(N/d)): base e and floor 1/11 for
    uniform trees, base 2 and floor 1/14 for centered trees. Needs N >= d >= 2.
    """
    _check_depth(d, N)
    if d < 2:
        raise ParameterRangeError("shape ratio floors are vacuous in d=1: every interval is shape-regular")
    if N < d:
        raise ParameterRangeError(f"N must be >= d, got N={N}, d={d}")
    root = math.sqrt(N / d)
    if kind == "uniform":
        return DeviationBound("shape_ratio", "ge", math.exp(root), 1.0 / 11.0, kind="at_least")
    if kind == "centered":
        return DeviationBound("shape_ratio", "ge", 2.0 ** root, 1.0 / 14.0, kind="at_least")
    raise KeyError(f"Unknown tree kind: '{kind}'. Available kinds: centered, uniform")


def mondrian_delta_max(d: int) -> float:
    """Largest admissible delta, 1 - (1 - e^-1)^d."""
    return 1.0 - (1.0 - math.exp(-1.0)) ** d


def mondrian_ratio(d: int, delta: float) -> DeviationBound:
    """P(h_+/h_- <= 5 d log(delta/d) / log(1-delta)) >= 1 - 2 delta for Mondrian cells."""
    if d < 1:
        raise ParameterRangeError(f"d must be >= 1, got {d}")
    upper = mondrian_delta_max(d)
    if not 0.0 < delta <= upper:
        raise ParameterRangeError(f"delta must lie in (0, {upper:.6g}], got {delta}")
    threshold = 5.0 * d * math.log(delta / d) / math.log(1.0 - delta)
    return DeviationBound("shape_ratio", "le", threshold, 1.0 - 2.0 * delta, kind="at_least")
