"""
Experiment configuration.

One dataclass carries the parameters of every experiment kind; each kind
reads the fields it needs. The config is echoed verbatim into the report.
"""
import dataclasses
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

from errors import ParameterRangeError, SeedRequiredError

FREQUENCY_EXPERIMENTS = ('deviation', 'not-shape-regular', 'mondrian-ratio', 'envelope')
MIN_FREQUENCY_REPLICATES = 100
MIN_RATE_POINTS = 4


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Parameters of one experiment run.

    Attributes:
        experiment: Experiment identifier (see experiments.registry)
        seed: Master seed; every replicate seed is derived from it
        d: Dimension
        n_grid: Sample sizes; rate curves need at least four increasing values
        replicates: Number of Monte Carlo replicates R
        event: Deviation event for the ``deviation`` experiment
        tree_kind: uniform, centered or mondrian
        depth: Number of splits N of a purely random tree
        alpha: Volume or centered-diameter exponent
        spread: Exponent beta of the uniform-tree diameter events
        lifetime: Mondrian lifetime
        delta: Confidence level
        sigma2: Noise parameter
        g: Built-in regression function
        noise: Noise kind
        estimator: knn, grid or cart
        k: Neighbor count (default from the sample size)
        m: Minimal leaf size (default from the sample size)
        beta: Shape-regularity constant of the CART-like tree
        cells_per_axis: Grid resolution (default from the sample size)
        gamma_targets: Cell shape ratios diam^d / volume probed at the origin
        cell_volume: Volume of the probed cell (default (sigma2 / n)^(d / (d+2)))
        class_size: Number of rectangles in the finite class
        target: sup-statistic or pointwise
        tolerance: Allowed deviation of a fitted slope from its target
        lattice_per_axis: Evaluation lattice resolution (default from d)
    """
    experiment: str
    seed: Optional[int] = None
    d: int = 2
    n_grid: Tuple[int, ...] = (500,)
    replicates: int = 1000
    event: str = 'uniform-diam-upper'
    tree_kind: str = 'uniform'
    depth: int = 50
    alpha: float = 2.0
    spread: float = 0.4
    lifetime: float = 10.0
    delta: float = 0.05
    sigma2: float = 0.25
    g: str = 'sum_coords'
    noise: str = 'gaussian'
    estimator: str = 'knn'
    k: Optional[int] = None
    m: Optional[int] = None
    beta: float = 2.0
    cells_per_axis: Optional[int] = None
    gamma_targets: Tuple[float, ...] = (1.0, 10.0, 100.0)
    cell_volume: Optional[float] = None
    class_size: int = 50
    target: str = 'sup-statistic'
    tolerance: float = 0.15
    lattice_per_axis: Optional[int] = None

    def __post_init__(self):
        if self.seed is None:
            raise SeedRequiredError("a master seed is required for every experiment")
        object.__setattr__(self, 'n_grid', tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, 'gamma_targets', tuple(float(g) for g in self.gamma_targets))
        if self.d < 1:
            raise ParameterRangeError(f"d must be >= 1, got {self.d}")
        if not self.n_grid or min(self.n_grid) < 1:
            raise ParameterRangeError("n_grid needs at least one sample size >= 1")
        if self.replicates < 1:
            raise ParameterRangeError(f"replicates must be >= 1, got {self.replicates}")
        if self.experiment in FREQUENCY_EXPERIMENTS and self.replicates < MIN_FREQUENCY_REPLICATES:
            raise ParameterRangeError(
                f"frequency experiments need at least {MIN_FREQUENCY_REPLICATES} replicates, got {self.replicates}"
            )
        if self.experiment == 'rate-curve':
            if len(self.n_grid) < MIN_RATE_POINTS:
                raise ParameterRangeError(f"rate curves need at least {MIN_RATE_POINTS} sample sizes")
            if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
                raise ParameterRangeError("n_grid must be strictly increasing")
        if self.depth < 0:
            raise ParameterRangeError(f"depth must be >= 0, got {self.depth}")
        if self.sigma2 < 0:
            raise ParameterRangeError(f"sigma2 must be >= 0, got {self.sigma2}")
        if not 0.0 < self.delta < 1.0:
            raise ParameterRangeError(f"delta must lie in (0, 1), got {self.delta}")

    @property
    def n(self) -> int:
        """Sample size of single-size experiments."""
        return self.n_grid[0]

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload['n_grid'] = list(self.n_grid)
        payload['gamma_targets'] = list(self.gamma_targets)
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'ExperimentConfig':
        """Build from a mapping, rejecting unknown keys."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(payload) - known)
        if unknown:
            raise ParameterRangeError(f"unknown experiment config keys: {', '.join(unknown)}")
        return cls(**payload)


def config_field_names() -> Tuple[str, ...]:
    return tuple(f.name for f in dataclasses.fields(ExperimentConfig))
