"""
Purely random trees (uniform, centered, Mondrian) tracked along one path.

Importing this package registers every tree kind with RandomTreeFactory.
"""
from typing import Tuple

from geometry import HyperRectangle

from .base import (
    BaseRandomTree,
    SplitSequence,
    SplitStep,
    volume_invariance_check,
)
from .centered_generator import CenteredTree
from .factory import RandomTreeFactory
from .mondrian_generator import MondrianParams, MondrianTree, mondrian_cell, mondrian_path
from .uniform_generator import UniformTree

PATH_KINDS = ('uniform', 'centered')


def grow_path(kind: str, x, d: int, N: int, seed: int) -> Tuple[HyperRectangle, SplitSequence]:
    """Cell of x after N splits of a uniform or centered tree, with the split record."""
    if kind not in PATH_KINDS:
        raise KeyError(f"Unknown tree kind: '{kind}'. Available kinds: {', '.join(PATH_KINDS)}")
    return RandomTreeFactory.get_generator(kind).grow_path(x, d, N, seed)


__all__ = [
    'BaseRandomTree',
    'CenteredTree',
    'MondrianParams',
    'MondrianTree',
    'PATH_KINDS',
    'RandomTreeFactory',
    'SplitSequence',
    'SplitStep',
    'UniformTree',
    'grow_path',
    'mondrian_cell',
    'mondrian_path',
    'volume_invariance_check',
]
