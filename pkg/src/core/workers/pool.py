import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor

from src.core.config import settings

logger = logging.getLogger(__name__)


def parallel_map[T, R](fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """Order-preserving map over a thread pool.

    The heavy lifting happens inside numpy/scipy kernels that release the GIL.
    """
    items = list(items)
    workers = min(workers or settings.workers, len(items)) if items else 1

    if workers <= 1:
        return [fn(item) for item in items]

    logger.debug("Dispatching %d tasks to %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
