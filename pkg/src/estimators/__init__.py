"""
Local map estimators.

Importing this package registers every estimator with EstimatorFactory.
"""
from .base import LocalMapEstimator, cell_mask, local_mean
from .cart_like import (
    CartCost,
    CartEstimator,
    CostFunction,
    PartitionTree,
    ShapeProfile,
    SplitSpec,
    best_split,
    cart_build,
    cart_cost,
    get_cost,
    shape_profile,
    tree_locate,
    tree_predict,
)
from .factory import EstimatorFactory
from .grid import FixedGridMap, GridEstimator, fixed_grid_map, regular_cuts
from .knn import KnnEstimator, knn_predict, knn_radius

__all__ = [
    'CartCost',
    'CartEstimator',
    'CostFunction',
    'EstimatorFactory',
    'FixedGridMap',
    'GridEstimator',
    'KnnEstimator',
    'LocalMapEstimator',
    'PartitionTree',
    'ShapeProfile',
    'SplitSpec',
    'best_split',
    'cart_build',
    'cart_cost',
    'cell_mask',
    'fixed_grid_map',
    'get_cost',
    'knn_predict',
    'knn_radius',
    'local_mean',
    'regular_cuts',
    'shape_profile',
    'tree_locate',
    'tree_predict',
]
