"""
Worker pool for per-update sample evaluation

Samples within one update are independent; results are gathered by sample
index so the outcome never depends on the number of threads.
"""

import atexit
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Sequence

from config import logger
from errors import SampleEvaluationError

_logger = logger(__name__)

_pools: Dict[int, ThreadPoolExecutor] = {}
_pool_lock = threading.Lock()


def get_pool(workers: int) -> ThreadPoolExecutor:
    """Get or create the shared executor for a worker count"""
    with _pool_lock:
        pool = _pools.get(workers)
        if pool is None:
            _logger.info(f"Starting evaluation pool with {workers} threads")
            pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="pibb-eval")
            _pools[workers] = pool
        return pool


def shutdown_pools() -> None:
    """Shut down every shared executor; also runs at interpreter exit"""
    with _pool_lock:
        for pool in _pools.values():
            pool.shutdown(wait=True)
        _pools.clear()


atexit.register(shutdown_pools)


def _run(objective: Callable, theta, update: int, index: int):
    try:
        return objective(theta)
    except Exception as e:
        _logger.error(f"Evaluation failed at update {update}, sample {index}: {e}")
        raise SampleEvaluationError(update, index, e) from e


def evaluate_batch(objective: Callable, samples: Sequence, workers: int = 1, update: int = 0) -> List:
    """
    Evaluate every sample with the objective.

    Args:
        objective: Callable applied to each sample
        samples: Parameter vectors, evaluated in index order
        workers: Thread count; 1 evaluates inline
        update: Update index, used in error reports

    Returns:
        Results in sample order

    Raises:
        SampleEvaluationError: First failing sample (lowest index)
    """
    if workers <= 1:
        return [_run(objective, theta, update, i) for i, theta in enumerate(samples)]
    pool = get_pool(workers)
    futures = [pool.submit(_run, objective, theta, update, i) for i, theta in enumerate(samples)]
    return [f.result() for f in futures]
