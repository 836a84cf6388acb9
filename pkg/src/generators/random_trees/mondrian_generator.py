"""
Mondrian process restricted to the cell of a query point.

Starting from [0,1]^d at time 0, the cell waits an exponential time with
rate equal to its linear dimension sum_k h_k. If the clock passes the
lifetime the cell is final; otherwise a side is picked with probability
proportional to its length, cut at a uniform location, and the child that
holds the query continues.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import ParameterRangeError
from geometry import HyperRectangle, unit_cube

from .base import BaseRandomTree, SplitSequence, check_query, open_unit_uniform, split_towards
from .factory import RandomTreeFactory

logger = logging.getLogger(__name__)

MAX_SPLITS = 100_000


@dataclass(frozen=True)
class MondrianParams:
    """Lifetime and dimension of a Mondrian process"""
    lifetime: float
    d: int

    def __post_init__(self):
        if not self.lifetime > 0:
            raise ParameterRangeError(f"lifetime must be > 0, got {self.lifetime}")
        if self.d < 1:
            raise ParameterRangeError(f"d must be >= 1, got {self.d}")


@RandomTreeFactory.register('mondrian')
class MondrianTree(BaseRandomTree):
    """Side chosen proportionally to its length, cut location uniform."""

    def __init__(self, lifetime: float = 1.0):
        if not lifetime > 0:
            raise ParameterRangeError(f"lifetime must be > 0, got {lifetime}")
        self.lifetime = float(lifetime)

    def draw_direction(self, cell: HyperRectangle, rng: np.random.Generator) -> int:
        widths = np.asarray(cell.widths)
        return int(rng.choice(cell.d, p=widths / widths.sum()))

    def draw_fraction(self, rng: np.random.Generator) -> float:
        return open_unit_uniform(rng)

    def grow_until_lifetime(self, x, d: int, seed: int) -> Tuple[HyperRectangle, SplitSequence]:
        x = check_query(x, d)
        rng = np.random.default_rng(seed)
        cell = unit_cube(d)
        seq = SplitSequence()
        clock = 0.0
        while len(seq) < MAX_SPLITS:
            clock += rng.exponential(1.0 / sum(cell.widths))
            if clock > self.lifetime:
                break
            p = self.draw_direction(cell, rng)
            u = self.draw_fraction(rng)
            cell, s_bar = split_towards(cell, x, p, u)
            seq.append(p, u, s_bar)
        else:
            logger.warning("Mondrian path hit %d splits before lifetime %g", MAX_SPLITS, self.lifetime)
        return cell, seq


def mondrian_path(params: MondrianParams, x, seed: int) -> Tuple[HyperRectangle, SplitSequence]:
    """Cell of x in a Mondrian partition of lifetime ``params.lifetime``, with its split record."""
    return MondrianTree(params.lifetime).grow_until_lifetime(x, params.d, seed)


def mondrian_cell(params: MondrianParams, x, seed: int) -> HyperRectangle:
    return mondrian_path(params, x, seed)[0]
