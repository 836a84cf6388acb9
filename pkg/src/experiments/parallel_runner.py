"""
Seeded replicate execution over a process pool.

Replicates are cut into contiguous batches, one task per batch. Each
replicate gets its own seed hashed from (master seed, experiment id, index),
and results are re-ordered by index, so the outcome does not depend on the
number of workers or on completion order.
"""
import concurrent.futures
import hashlib
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from .config import ExperimentConfig

logger = logging.getLogger(__name__)

ReplicateFn = Callable[[ExperimentConfig, int, int], Dict[str, float]]
ProgressFn = Callable[[int], None]

BATCHES_PER_WORKER = 4


def derive_seed(master: int, experiment_id: str, index: int) -> int:
    """63-bit seed from sha256 of the master seed, experiment id and replicate index."""
    digest = hashlib.sha256(f"{master}:{experiment_id}:{index}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & ((1 << 63) - 1)


@dataclass(frozen=True)
class ReplicateBatch:
    """A contiguous range of replicates for one worker"""
    task_id: int
    start_idx: int
    end_idx: int
    experiment_id: str
    config: ExperimentConfig
    replicate_fn: ReplicateFn


def worker_process(batch: ReplicateBatch) -> List[Tuple[int, Dict[str, float]]]:
    """
    Run every replicate of a batch.

    Args:
        batch: Work assignment

    Returns:
        (replicate index, statistics) pairs
    """
    out = []
    for index in range(batch.start_idx, batch.end_idx):
        seed = derive_seed(batch.config.seed, batch.experiment_id, index)
        out.append((index, batch.replicate_fn(batch.config, index, seed)))
    return out


def _create_batches(
    replicates: int,
    threads: int,
    experiment_id: str,
    config: ExperimentConfig,
    replicate_fn: ReplicateFn,
) -> List[ReplicateBatch]:
    size = max(1, math.ceil(replicates / (max(1, threads) * BATCHES_PER_WORKER)))
    return [
        ReplicateBatch(task_id, start, min(start + size, replicates), experiment_id, config, replicate_fn)
        for task_id, start in enumerate(range(0, replicates, size))
    ]


def run_replicates(
    experiment_id: str,
    config: ExperimentConfig,
    replicate_fn: ReplicateFn,
    replicates: Optional[int] = None,
    threads: int = 1,
    progress: Optional[ProgressFn] = None,
) -> List[Dict[str, float]]:
    """
    Run ``replicate_fn`` for every replicate index and return its statistics in index order.

    ``replicate_fn`` must be a module-level function so it can be sent to worker processes.
    """
    replicates = config.replicates if replicates is None else replicates
    batches = _create_batches(replicates, threads, experiment_id, config, replicate_fn)
    logger.info("%s: %d replicates in %d batches on %d worker(s)", experiment_id, replicates, len(batches), threads)

    results: Dict[int, Dict[str, float]] = {}
    if threads <= 1:
        for batch in batches:
            results.update(worker_process(batch))
            if progress:
                progress(batch.end_idx - batch.start_idx)
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as executor:
            futures = {executor.submit(worker_process, batch): batch for batch in batches}
            for future in concurrent.futures.as_completed(futures):
                batch = futures[future]
                results.update(future.result())
                if progress:
                    progress(batch.end_idx - batch.start_idx)
    return [results[i] for i in range(replicates)]


def raw_rows(name: str, values: List[float]) -> List[Tuple[str, int, float]]:
    return [(name, i, float(v)) for i, v in enumerate(values)]
