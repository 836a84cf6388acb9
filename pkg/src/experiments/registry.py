"""
Experiment registry and the single entry point used by the CLI.
"""
import logging
import time
from typing import Callable, Dict, List, Optional

from .config import ExperimentConfig
from .envelopes import envelope_check
from .parallel_runner import ProgressFn
from .rates import lower_bound_probe, rate_curve
from .report import ExperimentReport
from .tree_events import event_frequency, mondrian_ratio, non_sr_frequency, volume_invariance

logger = logging.getLogger(__name__)

ExperimentFn = Callable[..., ExperimentReport]

EXPERIMENTS: Dict[str, ExperimentFn] = {
    'volume-invariance': volume_invariance,
    'deviation': event_frequency,
    'not-shape-regular': non_sr_frequency,
    'mondrian-ratio': mondrian_ratio,
    'rate-curve': rate_curve,
    'lower-bound-probe': lower_bound_probe,
    'envelope': envelope_check,
}


def get_all_experiments() -> List[str]:
    return sorted(EXPERIMENTS)


def run_experiment(
    cfg: ExperimentConfig,
    threads: int = 1,
    progress: Optional[ProgressFn] = None,
    timing: bool = False,
) -> ExperimentReport:
    """
    Run the experiment named in the config.

    Args:
        cfg: Experiment configuration
        threads: Worker processes for the replicates
        progress: Called with the number of finished replicates after each batch
        timing: Record wall-clock time in the report (breaks byte-identical reports)

    Raises:
        KeyError: unknown experiment
    """
    if cfg.experiment not in EXPERIMENTS:
        raise KeyError(
            f"Unknown experiment: '{cfg.experiment}'. Available experiments: {', '.join(get_all_experiments())}"
        )
    start = time.perf_counter()
    report = EXPERIMENTS[cfg.experiment](cfg, threads=threads, progress=progress)
    if timing:
        report.runtime_seconds = round(time.perf_counter() - start, 3)
    logger.info("%s finished: %s", cfg.experiment, "PASS" if report.passed else "FAIL")
    return report
