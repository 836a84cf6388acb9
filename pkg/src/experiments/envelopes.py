"""
Envelope checks: how often the normalized noise supremum over a finite class,
or the pointwise estimation error, exceeds its high-probability bound.
"""
import logging
import math
from typing import Dict, Optional

import numpy as np

from bounds import BoundSpec, FiniteSetClass, count_patterns, rectangles_from_boxes, sup_statistic_bound, variance_term
from errors import ParameterRangeError

from .config import ExperimentConfig
from .parallel_runner import ProgressFn, derive_seed, raw_rows, run_replicates
from .rates import build_estimator, evaluation_lattice, sample_for
from .report import ExperimentReport, frequency_row

logger = logging.getLogger(__name__)

TARGETS = ('sup-statistic', 'pointwise')
CLASS_GRID_STEP = 0.1
POINTWISE_LATTICE_PER_AXIS = 10


def grid_rectangle_class(cfg: ExperimentConfig) -> FiniteSetClass:
    """``class_size`` boxes with corners on the 0.1 grid, drawn once from the master seed."""
    rng = np.random.default_rng(derive_seed(cfg.seed, 'rectangle-class', 0))
    grid = np.round(np.arange(0.0, 1.0 + CLASS_GRID_STEP / 2, CLASS_GRID_STEP), 10)
    lows = np.empty((cfg.class_size, cfg.d))
    highs = np.empty((cfg.class_size, cfg.d))
    for j in range(cfg.class_size):
        for k in range(cfg.d):
            a, b = np.sort(rng.choice(grid, size=2, replace=False))
            lows[j, k], highs[j, k] = a, b
    return rectangles_from_boxes(lows, highs)


def sup_replicate(cfg: ExperimentConfig, index: int, seed: int) -> Dict[str, float]:
    rng = np.random.default_rng(seed)
    set_class = grid_rectangle_class(cfg)
    X = rng.random((cfg.n, cfg.d))
    eps = math.sqrt(cfg.sigma2) * rng.standard_normal(cfg.n)
    membership = set_class.patterns(X)[1:]
    counts = membership.sum(axis=1)
    occupied = counts > 0
    if not occupied.any():
        return {'sup': 0.0, 'bound': math.inf, 'exceed': 0.0}
    sums = membership[occupied].astype(float) @ eps
    sup = float(np.max(sums / np.sqrt(counts[occupied])))
    patterns = count_patterns(membership[occupied])
    bound = sup_statistic_bound(cfg.sigma2, math.log(patterns), cfg.delta)
    return {'sup': sup, 'bound': bound, 'exceed': float(sup > bound)}


def pointwise_replicate(cfg: ExperimentConfig, index: int, seed: int) -> Dict[str, float]:
    g, ds = sample_for(cfg, cfg.n, seed)
    estimator = build_estimator(cfg, cfg.n).fit(ds)
    points = evaluation_lattice(cfg.d, cfg.lattice_per_axis or POINTWISE_LATTICE_PER_AXIS)
    v = cfg.d + 1 if cfg.estimator == 'knn' else 2 * cfg.d
    spec = BoundSpec(n=cfg.n, delta=cfg.delta, v=v, sigma2=cfg.sigma2, lipschitz=g.lipschitz, d=cfg.d)
    errors = np.abs(estimator.predict(points) - g(points))
    counts = estimator.local_counts(points)
    diameters = estimator.local_diameters(points)
    worst_margin = -math.inf
    for err, count, diam in zip(errors, counts, diameters):
        if count < 1:
            continue
        bound = variance_term(spec, int(count)) + g.lipschitz * float(diam)
        worst_margin = max(worst_margin, float(err) - bound)
    return {'margin': worst_margin, 'exceed': float(worst_margin > 0)}


def envelope_check(cfg: ExperimentConfig, threads: int = 1, progress: Optional[ProgressFn] = None) -> ExperimentReport:
    """
    Exceedance frequency of the sup-statistic bound (judged against delta) or
    of the pointwise bound over an evaluation lattice (judged against 2 delta).
    """
    if cfg.target not in TARGETS:
        raise KeyError(f"Unknown envelope target: '{cfg.target}'. Available targets: {', '.join(TARGETS)}")
    if cfg.target == 'sup-statistic':
        if cfg.class_size < 1:
            raise ParameterRangeError(f"class_size must be >= 1, got {cfg.class_size}")
        stats_ = run_replicates('envelope:sup-statistic', cfg, sup_replicate, threads=threads, progress=progress)
        events = int(sum(s['exceed'] for s in stats_))
        row = frequency_row('sup-statistic', events, len(stats_), cfg.delta, details={
            'class_size': cfg.class_size,
            'n': cfg.n,
            'median_sup': float(np.median([s['sup'] for s in stats_])),
        })
        raw = raw_rows('sup', [s['sup'] for s in stats_])
    else:
        if cfg.delta >= 0.5:
            raise ParameterRangeError(f"the pointwise bound needs delta < 1/2, got {cfg.delta}")
        stats_ = run_replicates(f'envelope:pointwise:{cfg.estimator}', cfg, pointwise_replicate,
                                threads=threads, progress=progress)
        events = int(sum(s['exceed'] for s in stats_))
        row = frequency_row(f'pointwise-{cfg.estimator}', events, len(stats_), 2.0 * cfg.delta, details={
            'estimator': cfg.estimator,
            'n': cfg.n,
        })
        raw = raw_rows('margin', [s['margin'] for s in stats_])
    report = ExperimentReport('envelope', cfg.to_dict(), cfg.seed, [row])
    report.raw = raw
    return report
