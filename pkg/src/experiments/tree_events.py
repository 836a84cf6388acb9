"""
Monte Carlo checks of purely random tree cells: volume invariance,
diameter and volume tails, shape-ratio floors and the Mondrian ratio bound.
"""
import logging
import math
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy import stats

from bounds import DeviationBound, tree_deviations
from errors import ParameterRangeError
from generators.random_trees import (
    MondrianParams,
    RandomTreeFactory,
    grow_path,
    mondrian_path,
    volume_invariance_check,
)
from geometry import HyperRectangle, diameter, shape_ratio, volume

from .config import ExperimentConfig
from .parallel_runner import ProgressFn, raw_rows, run_replicates
from .report import FAIL, PASS, RULE_ZERO, ExperimentReport, ResultRow, frequency_row, info_row

logger = logging.getLogger(__name__)

TREE_KINDS = ('uniform', 'centered', 'mondrian')
KS_TOLERANCE = 0.03

# event -> (tree kind, bound builder, statistic)
DEVIATION_EVENTS: Dict[str, Tuple[str, Callable[[ExperimentConfig], DeviationBound], Callable[[HyperRectangle], float]]] = {
    'uniform-diam-upper': ('uniform', lambda c: tree_deviations.uniform_diameter_upper(c.d, c.depth, c.spread), diameter),
    'uniform-diam-lower': ('uniform', lambda c: tree_deviations.uniform_diameter_lower(c.d, c.depth, c.spread), diameter),
    'uniform-volume-lower': ('uniform', lambda c: tree_deviations.uniform_volume_lower(c.depth, c.alpha), volume),
    'uniform-volume-upper': ('uniform', lambda c: tree_deviations.uniform_volume_upper(c.depth, c.alpha), volume),
    'centered-diam-upper': ('centered', lambda c: tree_deviations.centered_diameter_upper(c.d, c.depth, c.alpha), diameter),
    'centered-diam-lower': ('centered', lambda c: tree_deviations.centered_diameter_lower(c.d, c.depth, c.alpha), diameter),
    'centered-volume': ('centered', lambda c: tree_deviations.centered_volume(c.depth, c.alpha), volume),
}


def _query_and_seed(d: int, seed: int) -> Tuple[np.ndarray, int]:
    rng = np.random.default_rng(seed)
    return rng.random(d), int(rng.integers(1 << 62))


def _path_cell(kind: str, cfg: ExperimentConfig, seed: int, depth: Optional[int] = None):
    x, tree_seed = _query_and_seed(cfg.d, seed)
    if kind == 'mondrian':
        return mondrian_path(MondrianParams(cfg.lifetime, cfg.d), x, tree_seed)
    return grow_path(kind, x, cfg.d, cfg.depth if depth is None else depth, tree_seed)


def volume_replicate(cfg: ExperimentConfig, index: int, seed: int) -> Dict[str, float]:
    depth = int(np.random.default_rng(seed ^ 0x5EED).integers(cfg.depth + 1))
    cell, seq = _path_cell(cfg.tree_kind, cfg, seed, depth)
    product = seq.reduction_product()
    rel_error = abs(volume(cell) - product) / product if product > 0 else 0.0
    # full-depth cell against a product of fresh, independent split fractions
    full_cell, full_seq = _path_cell(cfg.tree_kind, cfg, seed)
    rng = np.random.default_rng(seed ^ 0xF4AC)
    tree = RandomTreeFactory.get_generator(cfg.tree_kind, **_tree_params(cfg))
    independent = float(np.prod([tree.draw_fraction(rng) for _ in range(len(full_seq))]))
    return {
        'ok': float(volume_invariance_check(cell, seq)),
        'rel_error': rel_error,
        'volume': volume(full_cell),
        'independent_product': independent,
    }


def _tree_params(cfg: ExperimentConfig) -> Dict[str, float]:
    return {'lifetime': cfg.lifetime} if cfg.tree_kind == 'mondrian' else {}


def ks_tolerance(replicates: int) -> float:
    """0.03, widened to the 1% two-sample critical value when R is small."""
    return max(KS_TOLERANCE, 1.63 * math.sqrt(2.0 / replicates))


def volume_invariance(cfg: ExperimentConfig, threads: int = 1, progress: Optional[ProgressFn] = None) -> ExperimentReport:
    """
    Count paths whose cell volume differs from the product of the length
    reductions, and compare the volume law at full depth with the law of a
    product of independent split fractions.
    """
    if cfg.tree_kind not in TREE_KINDS:
        raise KeyError(f"Unknown tree kind: '{cfg.tree_kind}'. Available kinds: {', '.join(TREE_KINDS)}")
    stats_ = run_replicates('volume-invariance', cfg, volume_replicate, threads=threads, progress=progress)
    violations = sum(1 for s in stats_ if s['ok'] < 1.0)
    worst = max(s['rel_error'] for s in stats_)
    volumes = np.array([s['volume'] for s in stats_])
    products = np.array([s['independent_product'] for s in stats_])
    ks = float(stats.ks_2samp(volumes, products).statistic)
    tolerance = ks_tolerance(len(stats_))
    rows = [
        ResultRow(
            'volume-invariance', 'value', float(violations), None, 0.0,
            PASS if violations == 0 else FAIL, RULE_ZERO,
            {'tree_kind': cfg.tree_kind, 'paths': len(stats_), 'max_relative_error': worst},
        ),
        info_row('volume-law-ks', ks, {
            'tree_kind': cfg.tree_kind,
            'depth': cfg.depth,
            'tolerance': tolerance,
            'within_tolerance': ks < tolerance,
        }),
    ]
    report = ExperimentReport('volume-invariance', cfg.to_dict(), cfg.seed, rows)
    report.raw = raw_rows('rel_error', [s['rel_error'] for s in stats_]) + raw_rows('volume', volumes.tolist())
    return report


def deviation_replicate(cfg: ExperimentConfig, index: int, seed: int) -> Dict[str, float]:
    kind, _, statistic = DEVIATION_EVENTS[cfg.event]
    cell, _ = _path_cell(kind, cfg, seed)
    return {'statistic': statistic(cell)}


def event_frequency(cfg: ExperimentConfig, threads: int = 1, progress: Optional[ProgressFn] = None) -> ExperimentReport:
    """
    Frequency of a diameter or volume tail event against its probability bound.

    Raises:
        KeyError: unknown event
        ParameterRangeError: parameters outside the range of the bound
    """
    if cfg.event not in DEVIATION_EVENTS:
        raise KeyError(f"Unknown deviation event: '{cfg.event}'. Available events: {', '.join(sorted(DEVIATION_EVENTS))}")
    kind, build_bound, _ = DEVIATION_EVENTS[cfg.event]
    bound = build_bound(cfg)
    stats_ = run_replicates(f'deviation:{cfg.event}', cfg, deviation_replicate, threads=threads, progress=progress)
    values = [s['statistic'] for s in stats_]
    events = sum(1 for v in values if bound.event(v))
    row = frequency_row(cfg.event, events, len(values), bound.probability, details={
        'tree_kind': kind,
        'statistic': bound.statistic,
        'direction': bound.direction,
        'threshold': bound.threshold,
    })
    report = ExperimentReport('deviation', cfg.to_dict(), cfg.seed, [row])
    report.raw = raw_rows(bound.statistic, values)
    return report


def ratio_replicate(cfg: ExperimentConfig, index: int, seed: int) -> Dict[str, float]:
    cell, _ = _path_cell(cfg.tree_kind, cfg, seed)
    return {'ratio': shape_ratio(cell)}


def non_sr_frequency(cfg: ExperimentConfig, threads: int = 1, progress: Optional[ProgressFn] = None) -> ExperimentReport:
    """Frequency of shape ratios above base^sqrt(N/d) against the floor 1/11 (uniform) or 1/14 (centered)."""
    if cfg.tree_kind not in ('uniform', 'centered'):
        raise KeyError(f"Unknown tree kind: '{cfg.tree_kind}'. Available kinds: centered, uniform")
    if cfg.d < 2:
        raise ParameterRangeError("d=1 refused: every interval has shape ratio 1, so the floor is vacuous")
    bound = tree_deviations.not_shape_regular(cfg.tree_kind, cfg.d, cfg.depth)
    stats_ = run_replicates(f'not-shape-regular:{cfg.tree_kind}', cfg, ratio_replicate, threads=threads, progress=progress)
    ratios = [s['ratio'] for s in stats_]
    events = sum(1 for r in ratios if bound.event(r))
    row = frequency_row(f'{cfg.tree_kind}-ratio-floor', events, len(ratios), bound.probability, kind='at_least',
                        details={'threshold': bound.threshold})
    report = ExperimentReport('not-shape-regular', cfg.to_dict(), cfg.seed, [row])
    report.raw = raw_rows('shape_ratio', ratios)
    return report


def mondrian_replicate(cfg: ExperimentConfig, index: int, seed: int) -> Dict[str, float]:
    cell, seq = _path_cell('mondrian', cfg, seed)
    return {'ratio': shape_ratio(cell), 'splits': float(len(seq))}


def mondrian_ratio(cfg: ExperimentConfig, threads: int = 1, progress: Optional[ProgressFn] = None) -> ExperimentReport:
    """Frequency of Mondrian shape ratios below 5 d log(delta/d) / log(1-delta), against 1 - 2 delta."""
    bound = tree_deviations.mondrian_ratio(cfg.d, cfg.delta)
    stats_ = run_replicates('mondrian-ratio', cfg, mondrian_replicate, threads=threads, progress=progress)
    ratios = np.array([s['ratio'] for s in stats_])
    events = int(np.sum(ratios <= bound.threshold))
    rows = [
        frequency_row('mondrian-ratio', events, ratios.size, bound.probability, kind='at_least',
                      details={'threshold': bound.threshold, 'lifetime': cfg.lifetime}),
        info_row('median-ratio', float(np.median(ratios))),
        info_row('mean-splits', float(np.mean([s['splits'] for s in stats_]))),
    ]
    report = ExperimentReport('mondrian-ratio', cfg.to_dict(), cfg.seed, rows)
    report.raw = raw_rows('shape_ratio', ratios.tolist())
    return report
