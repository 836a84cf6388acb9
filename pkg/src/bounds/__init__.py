"""
Shattering coefficients and the numeric bound evaluators built on them.
"""
from .inequalities import (
    BoundSpec,
    MassBounds,
    cart_bound,
    cart_min_leaf_threshold,
    empirical_mass_bounds,
    is_large,
    knn_applicable,
    knn_bound,
    knn_min_neighbors_threshold,
    large_sample_threshold,
    optimal_rate_bound,
    pointwise_bound,
    sup_statistic_bound,
    vapnik_mass_upper,
    variance_term,
    volume_bound,
)
from .tree_deviations import DeviationBound
from .vc import (
    FiniteSetClass,
    balls_on_grid,
    count_patterns,
    intervals_on_grid,
    log_sauer,
    rectangles_from_boxes,
    rectangles_on_grid,
    sauer_binomial_sum,
    sauer_bound,
    shatter_count,
    vc_dim_bruteforce,
)
from . import tree_deviations

__all__ = [
    'BoundSpec',
    'DeviationBound',
    'FiniteSetClass',
    'MassBounds',
    'balls_on_grid',
    'count_patterns',
    'cart_bound',
    'cart_min_leaf_threshold',
    'empirical_mass_bounds',
    'intervals_on_grid',
    'is_large',
    'knn_applicable',
    'knn_bound',
    'knn_min_neighbors_threshold',
    'large_sample_threshold',
    'log_sauer',
    'optimal_rate_bound',
    'pointwise_bound',
    'rectangles_from_boxes',
    'rectangles_on_grid',
    'sauer_binomial_sum',
    'sauer_bound',
    'shatter_count',
    'sup_statistic_bound',
    'tree_deviations',
    'vapnik_mass_upper',
    'variance_term',
    'vc_dim_bruteforce',
    'volume_bound',
]
