"""
Ordered worker pool for data-parallel sweeps
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from maasslab.core.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def worker_count(requested: Optional[int] = None) -> int:
    """Resolve the worker count from an explicit request or MAASSLAB_WORKERS"""
    count = requested if requested is not None else settings.MAASSLAB_WORKERS
    return max(1, int(count))


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Apply fn to every item and return the results in input order

    Args:
        fn: pure function of one item
        items: work items
        workers: thread count, defaults to the configured worker count

    Returns:
        List of results aligned with items
    """
    items = list(items)
    workers = worker_count(workers)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
