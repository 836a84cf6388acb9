"""
Convergence-rate curves, log-log exponent fits and the elongated-cell probe.
"""
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize, stats

from errors import ParameterRangeError
from estimators import EstimatorFactory, LocalMapEstimator
from generators.sample_generator import CovariateLaw, NoiseModel, builtin_g, generate

from .config import ExperimentConfig
from .parallel_runner import ProgressFn, derive_seed, raw_rows, run_replicates
from .report import (
    FAIL,
    INFO,
    PASS,
    RULE_INCREASING,
    RULE_NON_VANISHING,
    RULE_RELATIVE,
    RULE_SLOPE,
    RULE_VANISHING,
    ExperimentReport,
    ResultRow,
    info_row,
)

logger = logging.getLogger(__name__)

MAX_LATTICE_DIMENSION = 6
ZERO_ERROR = 1e-12
ORACLE_REL_TOL = 0.2


def fit_exponent(pairs: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """
    Least-squares slope of log(error) against log(n), with its standard error.

    Raises:
        ParameterRangeError: fewer than four points or a nonpositive value
    """
    if len(pairs) < 4:
        raise ParameterRangeError(f"fit_exponent needs at least 4 points, got {len(pairs)}")
    n = np.array([p[0] for p in pairs], dtype=float)
    err = np.array([p[1] for p in pairs], dtype=float)
    if np.any(n <= 0) or np.any(err <= 0):
        raise ParameterRangeError("fit_exponent needs positive sample sizes and errors")
    fit = stats.linregress(np.log(n), np.log(err))
    return float(fit.slope), float(fit.stderr)


def lattice_per_axis(d: int) -> int:
    """Points per axis of a lattice with about 10^min(4, 2d) points."""
    return int(round(10.0 ** (min(4, 2 * d) / d)))


def evaluation_lattice(d: int, per_axis: Optional[int] = None) -> np.ndarray:
    """Midpoint lattice of [0,1]^d."""
    if d > MAX_LATTICE_DIMENSION:
        raise ParameterRangeError(f"evaluation lattice refused for d={d} > {MAX_LATTICE_DIMENSION}")
    q = per_axis or lattice_per_axis(d)
    axis = (np.arange(q) + 0.5) / q
    mesh = np.meshgrid(*([axis] * d), indexing='ij')
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def rate_parameters(estimator: str, n: int, d: int, cfg: ExperimentConfig) -> Dict[str, float]:
    """Tuning of each estimator for the n^(-1/(d+2)) rate, constants fixed to 1."""
    if estimator == 'knn':
        k = cfg.k or math.ceil(n ** (2.0 / (d + 2)) * math.log(n) ** (d / (d + 2.0)))
        return {'k': int(min(max(k, 1), n))}
    if estimator == 'cart':
        m = cfg.m or math.ceil(n ** (2.0 / (d + 2)))
        return {'m': int(min(max(m, 1), n)), 'beta': cfg.beta}
    if estimator == 'grid':
        return {'cells_per_axis': cfg.cells_per_axis or max(1, round(n ** (1.0 / (d + 2))))}
    raise KeyError(f"Unknown estimator: '{estimator}'. Available estimators: cart, grid, knn")


def build_estimator(cfg: ExperimentConfig, n: int) -> LocalMapEstimator:
    return EstimatorFactory.get_estimator(cfg.estimator, **rate_parameters(cfg.estimator, n, cfg.d, cfg))


def sample_for(cfg: ExperimentConfig, n: int, seed: int):
    g = builtin_g(cfg.g, cfg.d)
    ds = generate(CovariateLaw('uniform-cube', cfg.d), g, NoiseModel(cfg.noise, cfg.sigma2), n, seed)
    return g, ds


def rate_replicate(cfg: ExperimentConfig, index: int, seed: int) -> Dict[str, float]:
    lattice = evaluation_lattice(cfg.d, cfg.lattice_per_axis)
    center = np.full((1, cfg.d), 0.5)
    out = {}
    for n in cfg.n_grid:
        g, ds = sample_for(cfg, n, derive_seed(seed, 'n', n))
        estimator = build_estimator(cfg, n).fit(ds)
        out[f'sup@{n}'] = float(np.max(np.abs(estimator.predict(lattice) - g(lattice))))
        out[f'point@{n}'] = float(abs(estimator.predict(center)[0] - g(center)[0]))
    return out


def rate_curve(cfg: ExperimentConfig, threads: int = 1, progress: Optional[ProgressFn] = None) -> ExperimentReport:
    """
    Median sup-norm and center-point errors per sample size and their log-log slopes.

    The sup-norm slope is judged against -1/(d+2).
    """
    if cfg.d > MAX_LATTICE_DIMENSION:
        raise ParameterRangeError(f"rate curves refused for d={cfg.d} > {MAX_LATTICE_DIMENSION}")
    EstimatorFactory.get_class(cfg.estimator)
    target = -1.0 / (cfg.d + 2)
    stats_ = run_replicates(f'rate-curve:{cfg.estimator}', cfg, rate_replicate, threads=threads, progress=progress)

    rows: List[ResultRow] = []
    raw = []
    medians = {}
    for kind in ('sup', 'point'):
        med = [float(np.median([s[f'{kind}@{n}'] for s in stats_])) for n in cfg.n_grid]
        medians[kind] = med
        for n in cfg.n_grid:
            raw.extend(raw_rows(f'{kind}@{n}', [s[f'{kind}@{n}'] for s in stats_]))
        details = {
            'estimator': cfg.estimator,
            'n': list(cfg.n_grid),
            'median_error': med,
            'parameters': [rate_parameters(cfg.estimator, n, cfg.d, cfg) for n in cfg.n_grid],
        }
        name = f'{cfg.estimator}-{kind}-slope'
        if max(med) <= ZERO_ERROR:
            rows.append(ResultRow(name, 'slope', None, None, target, PASS, RULE_VANISHING, details))
            continue
        if min(med) <= 0:
            rows.append(ResultRow(name, 'slope', None, None, target,
                                  FAIL if kind == 'sup' else INFO, RULE_SLOPE, details))
            continue
        slope, se = fit_exponent(list(zip(cfg.n_grid, med)))
        if kind == 'sup':
            verdict = PASS if abs(slope - target) <= cfg.tolerance else FAIL
            rows.append(ResultRow(name, 'slope', slope, se, target, verdict, RULE_SLOPE,
                                  {**details, 'tolerance': cfg.tolerance}))
        else:
            rows.append(info_row(name, slope, {**details, 'se': se}))

    report = ExperimentReport('rate-curve', cfg.to_dict(), cfg.seed, rows)
    report.raw = raw
    return report


def elongation_for(gamma: float, d: int) -> float:
    """
    Ratio r >= 1 of the long side to the short sides such that a box with
    one side r b and d-1 sides b has diam^d / volume = gamma.
    """
    cube = d ** (d / 2.0)
    if d == 1:
        if gamma > 1.0:
            raise ParameterRangeError("d=1 refused: every interval has diam / length = 1")
        return 1.0
    if gamma <= cube:
        return 1.0

    def excess(log_r: float) -> float:
        r = math.exp(log_r)
        return (d / 2.0) * math.log(r * r + d - 1) - log_r - math.log(gamma)

    hi = 1.0
    while excess(hi) < 0:
        hi *= 2.0
    return math.exp(optimize.brentq(excess, 0.0, hi, xtol=1e-14))


def probe_cell(cfg: ExperimentConfig, gamma: float) -> np.ndarray:
    """Side lengths of the probed cell Π[0, h_k] for a target shape ratio."""
    d, n = cfg.d, cfg.n
    vol = cfg.cell_volume if cfg.cell_volume is not None else (max(cfg.sigma2, 1e-300) / n) ** (d / (d + 2.0))
    mass_floor = 2.0 ** (d + 4) * math.log(2.0)
    if n * vol < mass_floor:
        raise ParameterRangeError(
            f"cell violates the mass precondition: n * volume = {n * vol:.6g} < 2^(d+4) log 2 = {mass_floor:.6g}"
        )
    r = elongation_for(gamma, d)
    b = (vol / r) ** (1.0 / d)
    sides = np.full(d, b)
    sides[0] = r * b
    if np.any(sides > 1.0):
        raise ParameterRangeError(f"probed cell leaves [0,1]^d: sides {sides.tolist()}")
    return sides


def probe_oracle_mse(sides: np.ndarray, n: int, sigma2: float) -> float:
    """
    Exact E[(g_hat(0) - g(0))^2] for g = sum of coordinates, uniform covariates:
    the count K in the cell is Binomial(n, volume); given K >= 1 the error has
    squared bias (sum h / 2)^2 and variance (sum h^2 / 12 + sigma^2) / K; K = 0 gives 0.
    """
    p = float(np.prod(sides))
    k = np.arange(1, n + 1)
    pmf = stats.binom.pmf(k, n, p)
    bias2 = (float(sides.sum()) / 2.0) ** 2
    var = float(np.sum(sides ** 2)) / 12.0 + sigma2
    return float(np.sum(pmf * (bias2 + var / k)))


def probe_replicate(cfg: ExperimentConfig, index: int, seed: int) -> Dict[str, float]:
    rng = np.random.default_rng(seed)
    sigma = math.sqrt(cfg.sigma2)
    out = {}
    for gamma in cfg.gamma_targets:
        sides = probe_cell(cfg, gamma)
        K = int(rng.binomial(cfg.n, float(np.prod(sides))))
        if K == 0:
            out[f'sq_error@{gamma:g}'] = 0.0
            continue
        X = rng.uniform(0.0, 1.0, size=(K, cfg.d)) * sides
        Y = X.sum(axis=1) + sigma * rng.standard_normal(K)
        out[f'sq_error@{gamma:g}'] = float(Y.mean()) ** 2
    return out


def lower_bound_probe(cfg: ExperimentConfig, threads: int = 1, progress: Optional[ProgressFn] = None) -> ExperimentReport:
    """
    Root mean squared error of the local average at the origin over cells of
    fixed volume and growing elongation.

    PASS requires the error to increase strictly with the shape ratio, the
    first cell to match the closed-form error within 20%, and the ratio to
    (gamma sigma^2 / n)^(1/(d+2)) never to fall below half its first value.
    """
    if cfg.g != 'sum_coords':
        raise ParameterRangeError("the elongated-cell probe uses g = sum_coords")
    gammas = list(cfg.gamma_targets)
    if len(gammas) < 2 or any(b <= a for a, b in zip(gammas, gammas[1:])):
        raise ParameterRangeError("gamma_targets must hold at least two strictly increasing values")
    cells = {g: probe_cell(cfg, g) for g in gammas}
    stats_ = run_replicates('lower-bound-probe', cfg, probe_replicate, threads=threads, progress=progress)

    d, n = cfg.d, cfg.n
    rmse, ratios, rows, raw = [], [], [], []
    for g in gammas:
        key = f'sq_error@{g:g}'
        values = [s[key] for s in stats_]
        raw.extend(raw_rows(key, values))
        value = math.sqrt(float(np.mean(values)))
        sides = cells[g]
        achieved = float(np.sum(sides ** 2)) ** (d / 2.0) / float(np.prod(sides))
        scale = (achieved * max(cfg.sigma2, 1e-300) / n) ** (1.0 / (d + 2))
        rmse.append(value)
        ratios.append(value / scale)
        rows.append(info_row(f'rmse@gamma={g:g}', value, {
            'achieved_gamma': achieved,
            'sides': sides.tolist(),
            'ratio_to_optimal_scale': value / scale,
        }))

    increasing = all(b > a for a, b in zip(rmse, rmse[1:]))
    rows.append(ResultRow('rmse-increasing', 'value', float(increasing), None, None,
                          PASS if increasing else FAIL, RULE_INCREASING, {'rmse': rmse}))

    oracle = math.sqrt(probe_oracle_mse(cells[gammas[0]], n, cfg.sigma2))
    rel = abs(rmse[0] - oracle) / oracle if oracle > 0 else abs(rmse[0])
    rows.append(ResultRow('oracle-match', 'value', rmse[0], None, oracle,
                          PASS if rel <= ORACLE_REL_TOL else FAIL, RULE_RELATIVE, {'relative_difference': rel}))

    floor = 0.5 * ratios[0]
    ok = ratios[0] > 0 and all(r >= floor for r in ratios)
    rows.append(ResultRow('ratio-non-vanishing', 'value', min(ratios), None, floor,
                          PASS if ok else FAIL, RULE_NON_VANISHING, {'ratios': ratios}))

    report = ExperimentReport('lower-bound-probe', cfg.to_dict(), cfg.seed, rows)
    report.raw = raw
    return report
