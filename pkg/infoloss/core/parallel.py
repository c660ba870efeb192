"""
Worker pool helper

Results always come back in input order, so aggregated output does not
depend on how many workers ran.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(threads: Optional[int]) -> int:
    """``None`` or 0 means one worker per core"""
    if not threads:
        return os.cpu_count() or 1
    if threads < 0:
        raise ValueError(f"Worker count must be positive, got {threads}")
    return threads


def run_ordered(
    func: Callable[[T], R],
    items: Iterable[T],
    max_workers: int = 1,
    use_processes: bool = False,
) -> List[R]:
    """
    Apply ``func`` to every item, in parallel when ``max_workers > 1``

    Exact rational work is CPU bound and holds the GIL, so callers doing it
    pass ``use_processes=True`` (``func`` must then be a module-level
    function). numpy sampling releases the GIL and runs fine on threads.
    """
    items = list(items)
    if max_workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    workers = min(max_workers, len(items))
    executor_cls = ProcessPoolExecutor if use_processes else ThreadPoolExecutor
    logger.debug(f"Running {len(items)} tasks on {workers} {executor_cls.__name__} workers")
    with executor_cls(max_workers=workers) as executor:
        return list(executor.map(func, items))


def chunked(items: List[T], size: int) -> List[List[T]]:
    return [items[i:i + size] for i in range(0, len(items), size)]
