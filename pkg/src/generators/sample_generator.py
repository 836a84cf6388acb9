"""
Synthetic regression samples.

A sample is drawn from a covariate law on [0,1]^d, a regression function
with a known Lipschitz constant and a sub-Gaussian noise model. Generation
is a pure function of the seed.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from errors import DatasetFormatError, ParameterRangeError
from geometry import HyperRectangle

logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    """Regression sample (X_i, Y_i); arrays are read-only copies."""
    X: np.ndarray
    Y: np.ndarray
    true_g_values: Optional[np.ndarray] = None

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        Y = np.asarray(self.Y, dtype=float).reshape(-1)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DatasetFormatError("n ≥ 1 required: dataset has no rows")
        if Y.shape[0] != X.shape[0]:
            raise DatasetFormatError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
            raise DatasetFormatError("dataset contains NaN or infinite values")
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "Y", _frozen(Y))
        if self.true_g_values is not None:
            g = np.asarray(self.true_g_values, dtype=float).reshape(-1)
            if g.shape != Y.shape:
                raise DatasetFormatError("true_g_values must have one entry per row")
            object.__setattr__(self, "true_g_values", _frozen(g))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def restrict(self, mask: np.ndarray) -> "Dataset":
        """Sub-sample selected by a boolean mask or an index array."""
        g = None if self.true_g_values is None else self.true_g_values[mask]
        return Dataset(self.X[mask], self.Y[mask], g)

    def shifted(self, c: float) -> "Dataset":
        """Same covariates, responses shifted by c."""
        g = None if self.true_g_values is None else self.true_g_values + c
        return Dataset(self.X, self.Y + c, g)


@dataclass(frozen=True)
class RegressionFunction:
    """
    Regression function with a global Lipschitz constant.

    ``evaluator`` maps an (n, d) array to an n-vector. ``local_lipschitz``
    gives L(V) on a rectangle and defaults to the global constant.
    """
    name: str
    d: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    lipschitz: float
    local_evaluator: Optional[Callable[[HyperRectangle], float]] = field(default=None, compare=False)

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.d:
            raise ValueError(f"{self.name} expects points of dimension {self.d}, got {X.shape[1]}")
        return np.asarray(self.evaluator(X), dtype=float)

    def local_lipschitz(self, cell: HyperRectangle) -> float:
        if self.local_evaluator is None:
            return self.lipschitz
        return self.local_evaluator(cell)


def _sum_coords(d: int, c: float) -> RegressionFunction:
    return RegressionFunction("sum_coords", d, lambda X: X.sum(axis=1), math.sqrt(d))


def _constant_c(d: int, c: float) -> RegressionFunction:
    return RegressionFunction("constant_c", d, lambda X: np.full(X.shape[0], c), 0.0)


def _sine_product(d: int, c: float) -> RegressionFunction:
    # each partial derivative is bounded by pi, so the gradient norm by pi sqrt(d)
    return RegressionFunction(
        "sine_product", d, lambda X: np.prod(np.sin(np.pi * X), axis=1), math.pi * math.sqrt(d)
    )


BUILTIN_FUNCTIONS: Dict[str, Callable[[int, float], RegressionFunction]] = {
    "constant_c": _constant_c,
    "sine_product": _sine_product,
    "sum_coords": _sum_coords,
}


def builtin_g(name: str, d: int = 1, c: float = 3.0) -> RegressionFunction:
    """
    Look up a built-in regression function.

    Args:
        name: One of sum_coords, constant_c, sine_product
        d: Input dimension
        c: Value of constant_c

    Raises:
        KeyError: unknown name
    """
    if name not in BUILTIN_FUNCTIONS:
        raise KeyError(
            f"Unknown regression function: '{name}'. "
            f"Available functions: {', '.join(sorted(BUILTIN_FUNCTIONS))}"
        )
    if d < 1:
        raise ParameterRangeError(f"d must be >= 1, got {d}")
    return BUILTIN_FUNCTIONS[name](d, c)


NOISE_KINDS = ("gaussian", "bounded-uniform", "heteroscedastic-gaussian")


@dataclass(frozen=True)
class NoiseModel:
    """
    Sub-Gaussian noise with parameter sigma2.

    gaussian: N(0, sigma2). bounded-uniform: Uniform[-sigma, sigma], whose
    sub-Gaussian parameter is at most sigma2. heteroscedastic-gaussian:
    N(0, s(x)^2) with s(x) = sigma (0.5 + 0.5 x_1) <= sigma on [0,1]^d.
    """
    kind: str = "gaussian"
    sigma2: float = 1.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise KeyError(f"Unknown noise kind: '{self.kind}'. Available kinds: {', '.join(NOISE_KINDS)}")
        if self.sigma2 < 0:
            raise ParameterRangeError(f"sigma2 must be >= 0, got {self.sigma2}")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def scale(self, X: np.ndarray) -> np.ndarray:
        if self.kind == "heteroscedastic-gaussian":
            return self.sigma * (0.5 + 0.5 * X[:, 0])
        return np.full(X.shape[0], self.sigma)

    def sample(self, X: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        n = X.shape[0]
        if self.kind == "bounded-uniform":
            return rng.uniform(-self.sigma, self.sigma, size=n)
        return rng.standard_normal(n) * self.scale(X)


LAW_KINDS = ("uniform-cube", "density-floor")


@dataclass(frozen=True)
class CovariateLaw:
    """
    Covariate distribution on [0,1]^d.

    uniform-cube: Lebesgue measure. density-floor: mixture drawing a uniform
    point with probability b and otherwise a point whose first coordinate has
    density 2 x_1; the density is b + 2 (1 - b) x_1, which lies in [b, 2 - b].
    """
    kind: str = "uniform-cube"
    d: int = 1
    floor: float = 1.0

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise KeyError(f"Unknown covariate law: '{self.kind}'. Available laws: {', '.join(LAW_KINDS)}")
        if self.d < 1:
            raise ParameterRangeError(f"d must be >= 1, got {self.d}")
        if self.kind == "density-floor" and not 0.0 < self.floor <= 1.0:
            raise ParameterRangeError(f"density floor b must lie in (0, 1], got {self.floor}")

    @property
    def density_floor(self) -> float:
        return 1.0 if self.kind == "uniform-cube" else self.floor

    @property
    def kappa_rectangles(self) -> float:
        """Minimal-mass constant for rectangles: P(V) >= kappa f(x) lambda(V)."""
        if self.kind == "uniform-cube":
            return 1.0
        b = self.floor
        return b / (2.0 - b)

    @property
    def kappa_balls(self) -> float:
        """Constant for balls of radius below t0 centered in the cube."""
        return 2.0 ** (-self.d) * self.kappa_rectangles

    @property
    def t0(self) -> float:
        return 1.0

    def density(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        if self.kind == "uniform-cube":
            return np.ones(X.shape[0])
        b = self.floor
        return b + 2.0 * (1.0 - b) * X[:, 0]

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        X = rng.uniform(0.0, 1.0, size=(n, self.d))
        if self.kind == "density-floor" and self.floor < 1.0:
            tilted = rng.uniform(0.0, 1.0, size=n) >= self.floor
            # sqrt of a uniform has density 2 x
            X[tilted, 0] = np.sqrt(rng.uniform(0.0, 1.0, size=int(tilted.sum())))
        return X


def generate(
    law: CovariateLaw,
    g: RegressionFunction,
    noise: NoiseModel,
    n: int,
    seed: int,
) -> Dataset:
    """
    Draw n iid pairs (X_i, g(X_i) + eps_i).

    Raises:
        ParameterRangeError: n < 1 or a dimension mismatch between law and g
    """
    if n < 1:
        raise ParameterRangeError(f"n ≥ 1 required, got {n}")
    if law.d != g.d:
        raise ParameterRangeError(f"covariate law has d={law.d} but {g.name} expects d={g.d}")
    rng = np.random.default_rng(seed)
    X = law.sample(n, rng)
    g_values = g(X)
    Y = g_values + noise.sample(X, rng) if noise.sigma2 > 0 else g_values.copy()
    logger.debug("generated n=%d d=%d law=%s g=%s noise=%s", n, law.d, law.kind, g.name, noise.kind)
    return Dataset(X, Y, g_values)
