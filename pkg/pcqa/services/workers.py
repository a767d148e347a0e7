"""Worker pool for independent jobs with order-preserving results."""

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def parallel_map(func: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Map ``func`` over ``items``, in processes when workers > 1.

    Results come back in input order whatever the worker count, so output
    built from them does not depend on scheduling. ``func`` must be a
    module-level function.
    """
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    workers = min(workers, len(items))
    logger.debug("Running %d jobs on %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
