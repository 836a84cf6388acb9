"""
Estimator registry.

Estimator classes register themselves by name, so the CLI and experiment
harness construct them without knowing the concrete class.
"""
import logging
from typing import Dict, List, Type

from .base import LocalMapEstimator

logger = logging.getLogger(__name__)


class EstimatorFactory:
    """
    Registry of local map estimators.

    Usage:
        @EstimatorFactory.register('knn')
        class KnnEstimator(LocalMapEstimator):
            ...

        estimator = EstimatorFactory.get_estimator('knn', k=10)
    """

    _registry: Dict[str, Type[LocalMapEstimator]] = {}

    @classmethod
    def register(cls, name: str):
        """Decorator registering an estimator class under ``name``."""
        def decorator(estimator_class: Type[LocalMapEstimator]):
            if not issubclass(estimator_class, LocalMapEstimator):
                raise TypeError(
                    f"Estimator class must inherit from LocalMapEstimator, "
                    f"got {estimator_class.__name__}"
                )
            estimator_class.NAME = name
            cls._registry[name] = estimator_class
            return estimator_class
        return decorator

    @classmethod
    def get_class(cls, name: str) -> Type[LocalMapEstimator]:
        if name not in cls._registry:
            available = ', '.join(sorted(cls._registry.keys()))
            raise KeyError(f"Unknown estimator: '{name}'. Available estimators: {available}")
        return cls._registry[name]

    @classmethod
    def get_estimator(cls, name: str, **params) -> LocalMapEstimator:
        """Instantiate a registered estimator with its parameters."""
        estimator = cls.get_class(name)(**params)
        logger.debug("created estimator %s with %s", name, params)
        return estimator

    @classmethod
    def get_all_estimators(cls) -> List[str]:
        return sorted(cls._registry.keys())
