"""
CART-like regression trees restricted to shape-regular, well-populated splits.

Growth is breadth first from [0,1]^d. A cell is split at the admissible
(p, u) of smallest cost, where admissible means both children are
beta-regular and hold at least m sample points. Cells without an admissible
split stay leaves. Each gap between consecutive distinct coordinate values
inside the cell yields one candidate fraction u: its midpoint, clamped into
the range of u that keeps both children beta-regular.
"""
import logging
import math
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from errors import EmptyCellError, ParameterRangeError
from generators.sample_generator import Dataset
from geometry import REL_TOL, HyperRectangle, diameter, gamma_ratio, shape_ratio, unit_cube

from .base import LocalMapEstimator, cell_mask, check_in_cube
from .factory import EstimatorFactory

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
COST_TIE_TOL = 1e-12
# Halving resolves close points only down to the float spacing of their
# coordinates; the literal fallback stops at this depth.
MAX_FALLBACK_DEPTH = 60


@dataclass(frozen=True, order=True)
class SplitSpec:
    """Split of coordinate p (zero-based) at fraction u of the cell side."""
    p: int
    u: float

    def __post_init__(self):
        if self.p < 0:
            raise ParameterRangeError(f"split coordinate must be >= 0, got {self.p}")
        if not 0.0 < self.u < 1.0:
            raise ParameterRangeError(f"split fraction must lie in (0, 1), got {self.u}")

    def threshold(self, cell: HyperRectangle) -> float:
        a, b = cell.lower[self.p], cell.upper[self.p]
        return a + (b - a) * self.u

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "u": self.u}


class CostFunction(ABC):
    """Split cost M_n((p, u), V) computed from the sample restricted to V."""

    NAME: str = ""

    @abstractmethod
    def evaluate(self, split: SplitSpec, cell: HyperRectangle, X: np.ndarray, Y: np.ndarray) -> float:
        """Cost of one split; X, Y are the points of the cell."""
        pass

    def evaluate_coordinate(self, y_sorted: np.ndarray, left_counts: np.ndarray) -> np.ndarray:
        """
        Costs of several splits of one coordinate.

        Args:
            y_sorted: Responses of the cell ordered by the split coordinate
            left_counts: Number of points sent left by each candidate (each in 1..n-1)
        """
        costs = np.empty(left_counts.size)
        for j, n_left in enumerate(left_counts):
            costs[j] = self._cost_from_children(y_sorted[:n_left], y_sorted[n_left:])
        return costs

    @abstractmethod
    def _cost_from_children(self, y_left: np.ndarray, y_right: np.ndarray) -> float:
        pass


class CartCost(CostFunction):
    """Sum over both children of the within-child mean squared residual."""

    NAME = "cart"

    def evaluate(self, split: SplitSpec, cell: HyperRectangle, X: np.ndarray, Y: np.ndarray) -> float:
        go_left = X[:, split.p] <= split.threshold(cell)
        if not go_left.any() or go_left.all():
            raise EmptyCellError("empty cell: cart cost needs both children non-empty")
        return self._cost_from_children(Y[go_left], Y[~go_left])

    def _cost_from_children(self, y_left: np.ndarray, y_right: np.ndarray) -> float:
        return float(np.mean((y_left - y_left.mean()) ** 2) + np.mean((y_right - y_right.mean()) ** 2))

    def evaluate_coordinate(self, y_sorted: np.ndarray, left_counts: np.ndarray) -> np.ndarray:
        centered = y_sorted - y_sorted.mean()
        s1 = np.concatenate([[0.0], np.cumsum(centered)])
        s2 = np.concatenate([[0.0], np.cumsum(centered ** 2)])
        n = centered.size
        nl = left_counts.astype(float)
        nr = n - nl
        s1l, s2l = s1[left_counts], s2[left_counts]
        s1r, s2r = s1[n] - s1l, s2[n] - s2l
        sse_l = np.maximum(s2l - s1l ** 2 / nl, 0.0)
        sse_r = np.maximum(s2r - s1r ** 2 / nr, 0.0)
        return sse_l / nl + sse_r / nr


COST_FUNCTIONS: Dict[str, type] = {"cart": CartCost}


def get_cost(name: str) -> CostFunction:
    if name not in COST_FUNCTIONS:
        raise KeyError(f"Unknown cost function: '{name}'. Available costs: {', '.join(sorted(COST_FUNCTIONS))}")
    return COST_FUNCTIONS[name]()


def cart_cost(split: SplitSpec, cell: HyperRectangle, ds: Dataset) -> float:
    """
    CART cost of splitting ``cell`` with ``split`` on the sample points it holds.

    Raises:
        EmptyCellError: one of the children holds no sample point
    """
    mask = cell_mask(cell, ds.X)
    return CartCost().evaluate(split, cell, ds.X[mask], ds.Y[mask])


@dataclass
class TreeNode:
    """Node of a partition tree; leaves keep their sorted sample indices."""
    cell: HyperRectangle
    depth: int
    split: Optional[SplitSpec] = None
    threshold: float = math.nan
    left: int = -1
    right: int = -1
    indices: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def is_leaf(self) -> bool:
        return self.split is None


@dataclass
class PartitionTree:
    """Binary partition of the root cell. Node 0 is the root."""
    nodes: List[TreeNode]
    beta: float
    m: int

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    @property
    def d(self) -> int:
        return self.root.cell.d

    @property
    def depth(self) -> int:
        return max(node.depth for node in self.nodes)

    def leaves(self) -> List[TreeNode]:
        return [node for node in self.nodes if node.is_leaf]

    def cells(self) -> List[HyperRectangle]:
        """Every cell created during growth, root included."""
        return [node.cell for node in self.nodes]

    def locate_node(self, x) -> int:
        x = np.asarray(x, dtype=float).reshape(-1)
        node_id = 0
        while not self.nodes[node_id].is_leaf:
            node = self.nodes[node_id]
            node_id = node.left if x[node.split.p] <= node.threshold else node.right
        return node_id

    def locate_many(self, X: np.ndarray) -> np.ndarray:
        """Leaf node ids for every row of X."""
        p = np.array([n.split.p if n.split else 0 for n in self.nodes])
        thr = np.array([n.threshold for n in self.nodes])
        left = np.array([n.left for n in self.nodes])
        right = np.array([n.right for n in self.nodes])
        ids = np.zeros(X.shape[0], dtype=np.int64)
        internal = left[ids] >= 0
        while internal.any():
            rows = np.nonzero(internal)[0]
            nid = ids[rows]
            go_left = X[rows, p[nid]] <= thr[nid]
            ids[rows] = np.where(go_left, left[nid], right[nid])
            internal = left[ids] >= 0
        return ids

    def to_dict(self, node_id: int = 0) -> Dict[str, Any]:
        """Nested JSON-ready description of the subtree at ``node_id``."""
        node = self.nodes[node_id]
        payload: Dict[str, Any] = {
            "lower": list(node.cell.lower),
            "upper": list(node.cell.upper),
            "split": None if node.is_leaf else node.split.to_dict(),
            "children": [] if node.is_leaf else [self.to_dict(node.left), self.to_dict(node.right)],
            "leaf_indices": None if not node.is_leaf else [int(i) for i in node.indices],
        }
        if node_id == 0:
            payload = {"schema_version": SCHEMA_VERSION, "beta": self.beta, "m": self.m, **payload}
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "PartitionTree":
        version = payload.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ParameterRangeError(f"unsupported tree schema version: {version}")
        root_cell = HyperRectangle(tuple(payload["lower"]), tuple(payload["upper"]))
        nodes: List[TreeNode] = []

        def add(entry: Dict[str, Any], cell: HyperRectangle, depth: int) -> int:
            node_id = len(nodes)
            node = TreeNode(cell=cell, depth=depth)
            nodes.append(node)
            if entry["split"] is None:
                node.indices = np.asarray(entry["leaf_indices"] or [], dtype=np.int64)
                return node_id
            split = SplitSpec(int(entry["split"]["p"]), float(entry["split"]["u"]))
            left_cell, right_cell = cell.split(split.p, split.u)
            node.split = split
            node.threshold = left_cell.upper[split.p]
            left_entry, right_entry = entry["children"]
            node.left = add(left_entry, left_cell, depth + 1)
            node.right = add(right_entry, right_cell, depth + 1)
            return node_id

        add(payload, root_cell, 0)
        return cls(nodes=nodes, beta=float(payload.get("beta", math.inf)), m=int(payload.get("m", 1)))


def _feasible_interval(widths: Tuple[float, ...], p: int, beta: float) -> Optional[Tuple[float, float]]:
    """
    Closed range of fractions u on coordinate p that keep both children
    beta-regular, or None when no fraction does.

    A child side s = h_p * u must satisfy max(H, s) <= beta * min(h, s) where
    h and H are the smallest and largest of the other sides.
    """
    others = [w for k, w in enumerate(widths) if k != p]
    if not others:
        return 0.0, 1.0
    h_p, h_lo, h_hi = widths[p], min(others), max(others)
    if h_hi > beta * h_lo * (1.0 + REL_TOL):
        return None
    s_min, s_max = h_hi / beta, beta * h_lo
    lo = max(s_min / h_p, 1.0 - s_max / h_p, 0.0)
    hi = min(s_max / h_p, 1.0 - s_min / h_p, 1.0)
    if lo > hi:
        # a single admissible fraction can come out crossed by rounding
        if lo - hi > REL_TOL:
            return None
        lo = hi = (lo + hi) / 2.0
    return lo, hi


def _candidate_fractions(x_sorted: np.ndarray, a: float, b: float, lo: float, hi: float) -> np.ndarray:
    """
    One fraction per gap between consecutive distinct values: the gap
    midpoint, clamped into the part of the gap that lies inside [lo, hi].

    The cost only depends on which points fall left, so it is constant across
    a gap and any fraction in the clamped range scores the same.
    """
    distinct = np.unique(x_sorted)
    if distinct.size < 2:
        return np.empty(0)
    gap_lo = (distinct[:-1] - a) / (b - a)
    gap_hi = (distinct[1:] - a) / (b - a)
    left = np.maximum(gap_lo, lo)
    right = np.minimum(gap_hi, hi)
    ok = (left <= right) & (left < gap_hi)
    u = np.clip((gap_lo + gap_hi) / 2.0, left, right)[ok]
    return u[(u > 0.0) & (u < 1.0)]


def _beta_feasible(widths: Tuple[float, ...], p: int, u: np.ndarray, beta: float) -> np.ndarray:
    """Both children beta-regular for each candidate fraction on coordinate p."""
    others = [h for k, h in enumerate(widths) if k != p]
    h = widths[p]
    ok = np.ones(u.size, dtype=bool)
    for side in (h * u, h * (1.0 - u)):
        if others:
            h_min = np.minimum(min(others), side)
            h_max = np.maximum(max(others), side)
        else:
            h_min = h_max = side
        ok &= (h_min > 0) & (h_max <= beta * h_min * (1.0 + REL_TOL))
    return ok


def best_split(
    cell: HyperRectangle,
    X: np.ndarray,
    Y: np.ndarray,
    m: int,
    beta: float,
    cost: CostFunction,
) -> Optional[Tuple[SplitSpec, float]]:
    """
    Admissible split of smallest cost, or None when no split is admissible.

    Ties within a relative 1e-12 are resolved by smallest p, then smallest u.
    """
    n_cell = X.shape[0]
    if n_cell < 2 * m:
        return None
    candidates: List[Tuple[int, np.ndarray, np.ndarray]] = []
    for p in range(cell.d):
        a, b = cell.lower[p], cell.upper[p]
        order = np.argsort(X[:, p], kind="stable")
        x_sorted = X[order, p]
        interval = _feasible_interval(cell.widths, p, beta)
        if interval is None:
            continue
        u = _candidate_fractions(x_sorted, a, b, *interval)
        if u.size == 0:
            continue
        u = u[_beta_feasible(cell.widths, p, u, beta)]
        if u.size == 0:
            continue
        thresholds = a + (b - a) * u
        left_counts = np.searchsorted(x_sorted, thresholds, side="right")
        keep = (left_counts >= m) & (n_cell - left_counts >= m)
        if not keep.any():
            continue
        u, left_counts = u[keep], left_counts[keep]
        costs = cost.evaluate_coordinate(Y[order], left_counts)
        candidates.append((p, u, costs))

    if not candidates:
        return None
    min_cost = min(float(c.min()) for _, _, c in candidates)
    tol = COST_TIE_TOL * max(1.0, abs(min_cost))
    for p, u, costs in candidates:
        tied = np.nonzero(costs <= min_cost + tol)[0]
        if tied.size:
            j = tied[0]
            return SplitSpec(p, float(u[j])), float(costs[j])
    return None


def _has_populated_cut(X: np.ndarray, m: int) -> bool:
    """True when some coordinate can be cut with at least m points on each side."""
    n = X.shape[0]
    for column in X.T:
        _, counts = np.unique(column, return_counts=True)
        left = np.cumsum(counts)[:-1]
        if np.any((left >= m) & (n - left >= m)):
            return True
    return False


def _fallback_split(cell: HyperRectangle) -> SplitSpec:
    """Largest side, smallest coordinate among ties, cut in half."""
    h_max = max(cell.widths)
    p = next(k for k, h in enumerate(cell.widths) if h == h_max)
    return SplitSpec(p, 0.5)


def cart_build(
    ds: Dataset,
    m: int,
    beta: float = 2.0,
    cost: Optional[CostFunction] = None,
    literal_fallback: bool = False,
) -> PartitionTree:
    """
    Grow the tree generation by generation until no cell can be split.

    Args:
        ds: Sample on [0,1]^d
        m: Minimal number of points per child
        beta: Shape-regularity constant, at least 2
        cost: Split cost, CART by default
        literal_fallback: Cut the largest side in half when a cell has no
            admissible split although some cut would leave m points on each
            side, even if a child of the halving ends up with fewer than m
            points. Stops at depth MAX_FALLBACK_DEPTH

    Raises:
        ParameterRangeError: beta < 2 or m outside 1..n
    """
    if beta < 2:
        raise ParameterRangeError(f"beta must be >= 2 so that a shape-regular split always exists, got {beta}")
    if not 1 <= m <= ds.n:
        raise ParameterRangeError(f"m must lie in 1..{ds.n}, got {m}")
    check_in_cube(ds.X, ds.d)
    cost = cost or CartCost()

    nodes = [TreeNode(cell=unit_cube(ds.d), depth=0)]
    pending = deque([(0, np.arange(ds.n))])
    fallbacks = 0
    while pending:
        generation = list(pending)
        pending.clear()
        for node_id, idx in generation:
            node = nodes[node_id]
            X, Y = ds.X[idx], ds.Y[idx]
            found = best_split(node.cell, X, Y, m, beta, cost)
            if found is not None:
                split = found[0]
            elif literal_fallback and node.depth < MAX_FALLBACK_DEPTH and _has_populated_cut(X, m):
                split = _fallback_split(node.cell)
                fallbacks += 1
            else:
                node.indices = np.sort(idx)
                continue
            left_cell, right_cell = node.cell.split(split.p, split.u)
            node.split = split
            node.threshold = left_cell.upper[split.p]
            go_left = X[:, split.p] <= node.threshold
            node.left = len(nodes)
            nodes.append(TreeNode(cell=left_cell, depth=node.depth + 1))
            node.right = len(nodes)
            nodes.append(TreeNode(cell=right_cell, depth=node.depth + 1))
            pending.append((node.left, idx[go_left]))
            pending.append((node.right, idx[~go_left]))

    tree = PartitionTree(nodes=nodes, beta=beta, m=m)
    logger.info(
        "cart_build n=%d d=%d m=%d beta=%g: %d leaves, depth %d, %d fallback splits",
        ds.n, ds.d, m, beta, len(tree.leaves()), tree.depth, fallbacks,
    )
    return tree


def tree_locate(tree: PartitionTree, x) -> HyperRectangle:
    """Leaf cell containing x; a point on a split boundary goes left."""
    x = check_in_cube(x, tree.d)[0]
    return tree.nodes[tree.locate_node(x)].cell


def tree_predict(tree: PartitionTree, ds: Dataset, x) -> float:
    """Average response over the leaf containing x, 0 for an empty leaf."""
    x = check_in_cube(x, tree.d)[0]
    leaf = tree.nodes[tree.locate_node(x)]
    if leaf.indices is None or leaf.indices.size == 0:
        return 0.0
    return float(ds.Y[leaf.indices].mean())


@dataclass(frozen=True)
class ShapeProfile:
    """Summary of the leaf shape ratios of a tree."""
    leaves: int
    beta_min: float
    beta_median: float
    beta_max: float
    gamma_min: float
    gamma_median: float
    gamma_max: float
    all_beta_sr: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def shape_profile(tree: PartitionTree, beta: Optional[float] = None) -> ShapeProfile:
    """Leaf beta ratios h_+/h_- and gamma ratios diam^d/volume."""
    beta = tree.beta if beta is None else beta
    cells = [leaf.cell for leaf in tree.leaves()]
    ratios = np.array([shape_ratio(c) for c in cells])
    gammas = np.array([gamma_ratio(c) for c in cells])
    all_sr = bool(np.all(ratios <= beta * (1.0 + REL_TOL))) if math.isfinite(beta) else True
    return ShapeProfile(
        leaves=len(cells),
        beta_min=float(ratios.min()),
        beta_median=float(np.median(ratios)),
        beta_max=float(ratios.max()),
        gamma_min=float(gammas.min()),
        gamma_median=float(np.median(gammas)),
        gamma_max=float(gammas.max()),
        all_beta_sr=all_sr,
    )


@EstimatorFactory.register('cart')
class CartEstimator(LocalMapEstimator):
    """Shape-regular CART-like tree with leaf averages."""

    def __init__(self, m: int, beta: float = 2.0, cost: str = "cart", literal_fallback: bool = False):
        super().__init__()
        if m < 1:
            raise ParameterRangeError(f"m must be >= 1, got {m}")
        if beta < 2:
            raise ParameterRangeError(f"beta must be >= 2, got {beta}")
        self.m = int(m)
        self.beta = float(beta)
        self.cost = cost
        self.literal_fallback = literal_fallback
        self.tree: Optional[PartitionTree] = None
        self._leaf_means: Optional[np.ndarray] = None

    def params(self) -> Dict[str, Any]:
        return {"m": self.m, "beta": self.beta, "cost": self.cost, "literal_fallback": self.literal_fallback}

    def fit(self, ds: Dataset) -> "CartEstimator":
        tree = cart_build(ds, self.m, self.beta, get_cost(self.cost), self.literal_fallback)
        return self.attach(tree, ds)

    def attach(self, tree: PartitionTree, ds: Dataset) -> "CartEstimator":
        """Use an already grown tree with its sample."""
        means = np.zeros(len(tree.nodes))
        for node_id, node in enumerate(tree.nodes):
            if node.is_leaf and node.indices is not None and node.indices.size:
                means[node_id] = ds.Y[node.indices].mean()
        self.tree = tree
        self._leaf_means = means
        self._dataset = ds
        return self

    def locate(self, x) -> HyperRectangle:
        self.check_fitted()
        return tree_locate(self.tree, x)

    def predict(self, X) -> np.ndarray:
        self.check_fitted()
        X = check_in_cube(X, self.tree.d)
        return self._leaf_means[self.tree.locate_many(X)]

    def local_counts(self, X) -> np.ndarray:
        self.check_fitted()
        X = check_in_cube(X, self.tree.d)
        sizes = np.array([0 if n.indices is None else n.indices.size for n in self.tree.nodes])
        return sizes[self.tree.locate_many(X)]

    def local_diameters(self, X) -> np.ndarray:
        self.check_fitted()
        X = check_in_cube(X, self.tree.d)
        diameters = np.array([diameter(n.cell) for n in self.tree.nodes])
        return diameters[self.tree.locate_many(X)]

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["tree"] = self.tree.to_dict()
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any], ds: Dataset) -> "CartEstimator":
        estimator = cls(**payload.get("params", {}))
        if "tree" in payload:
            return estimator.attach(PartitionTree.from_dict(payload["tree"]), ds)
        return estimator.fit(ds)
