"""
Random tree registry, keyed by tree kind.
"""
from typing import Dict, List, Type

from .base import BaseRandomTree


class RandomTreeFactory:
    """
    Registry of purely random tree generators.

    Usage:
        @RandomTreeFactory.register('uniform')
        class UniformTree(BaseRandomTree):
            ...

        tree = RandomTreeFactory.get_generator('uniform')
    """

    _registry: Dict[str, Type[BaseRandomTree]] = {}

    @classmethod
    def register(cls, kind: str):
        """Decorator registering a tree class for ``kind``."""
        def decorator(tree_class: Type[BaseRandomTree]):
            if not issubclass(tree_class, BaseRandomTree):
                raise TypeError(
                    f"Tree class must inherit from BaseRandomTree, got {tree_class.__name__}"
                )
            tree_class.KIND = kind
            cls._registry[kind] = tree_class
            return tree_class
        return decorator

    @classmethod
    def get_generator(cls, kind: str, **params) -> BaseRandomTree:
        if kind not in cls._registry:
            available = ', '.join(sorted(cls._registry.keys()))
            raise KeyError(f"Unknown tree kind: '{kind}'. Available kinds: {available}")
        return cls._registry[kind](**params)

    @classmethod
    def get_all_kinds(cls) -> List[str]:
        return sorted(cls._registry.keys())
