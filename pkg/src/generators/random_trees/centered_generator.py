"""
Centered random trees: coordinate uniform on {0..d-1}, every cut at the middle.
"""
import numpy as np

from geometry import HyperRectangle

from .base import BaseRandomTree
from .factory import RandomTreeFactory


@RandomTreeFactory.register('centered')
class CenteredTree(BaseRandomTree):
    """Split fraction fixed to 1/2, so a depth-N cell has volume 2^-N."""

    def draw_direction(self, cell: HyperRectangle, rng: np.random.Generator) -> int:
        return int(rng.integers(cell.d))

    def draw_fraction(self, rng: np.random.Generator) -> float:
        return 0.5
