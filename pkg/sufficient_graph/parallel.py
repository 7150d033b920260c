"""Bounded worker pool for independent units of work

Work items are pairs during estimation and replications during evaluation.
Results always come back in input order, so output does not depend on how the
pool schedules the items.
"""

import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Awaitable, Callable, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


async def map_ordered(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """Apply fn to every item, preserving order

    Args:
        fn: Picklable callable (module-level function or functools.partial of one)
        items: Work items
        workers: Pool size; 1 runs inline in the calling process

    Returns:
        [fn(item) for item in items]
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    size = min(workers, len(items))
    logger.debug(f"Dispatching {len(items)} items to {size} worker processes")
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=size) as pool:
        futures = [loop.run_in_executor(pool, fn, item) for item in items]
        return list(await asyncio.gather(*futures))


def run_sync(coro: Awaitable[Any]) -> Any:
    """Run a coroutine from synchronous code"""
    return asyncio.run(coro)
