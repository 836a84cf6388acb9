"""
Uniform random trees: coordinate uniform on {0..d-1}, fraction Uniform(0, 1).
"""
import numpy as np

from geometry import HyperRectangle

from .base import BaseRandomTree, open_unit_uniform
from .factory import RandomTreeFactory


@RandomTreeFactory.register('uniform')
class UniformTree(BaseRandomTree):
    """Split fractions drawn uniformly on (0, 1)."""

    def draw_direction(self, cell: HyperRectangle, rng: np.random.Generator) -> int:
        return int(rng.integers(cell.d))

    def draw_fraction(self, rng: np.random.Generator) -> float:
        return open_unit_uniform(rng)
