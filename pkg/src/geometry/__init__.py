"""
Cell geometry: hyper-rectangles, balls and shape-regularity predicates.
"""
from .cells import (
    REL_TOL,
    Ball,
    HyperRectangle,
    ShapeParams,
    beta_to_gamma,
    diameter,
    gamma_ratio,
    gamma_to_beta,
    is_beta_sr,
    is_gamma_sr,
    shape_ratio,
    side_extremes,
    unit_cube,
    volume,
)

__all__ = [
    'REL_TOL',
    'Ball',
    'HyperRectangle',
    'ShapeParams',
    'beta_to_gamma',
    'diameter',
    'gamma_ratio',
    'gamma_to_beta',
    'is_beta_sr',
    'is_gamma_sr',
    'shape_ratio',
    'side_extremes',
    'unit_cube',
    'volume',
]
