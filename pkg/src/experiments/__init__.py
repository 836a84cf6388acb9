"""
Monte Carlo harness: frequency tests of tail bounds, exponent fits of
convergence rates, and machine-readable reports.
"""
from .config import ExperimentConfig
from .envelopes import envelope_check
from .parallel_runner import derive_seed, run_replicates
from .rates import fit_exponent, lower_bound_probe, rate_curve
from .registry import EXPERIMENTS, get_all_experiments, run_experiment
from .report import ExperimentReport, ResultRow, binomial_se
from .tree_events import event_frequency, mondrian_ratio, non_sr_frequency, volume_invariance

__all__ = [
    'EXPERIMENTS',
    'ExperimentConfig',
    'ExperimentReport',
    'ResultRow',
    'binomial_se',
    'derive_seed',
    'envelope_check',
    'event_frequency',
    'fit_exponent',
    'get_all_experiments',
    'lower_bound_probe',
    'mondrian_ratio',
    'non_sr_frequency',
    'rate_curve',
    'run_experiment',
    'run_replicates',
    'volume_invariance',
]
