import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from tqdm import tqdm

from .config import get_settings, worker_count

# Configure logging
logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], desc: Optional[str] = None) -> List[R]:
    """
    Applies ``fn`` to every item on a thread pool and returns the results in
    input order, so callers see the same output for every worker count.

    Args:
        fn: A pure function of one item.
        items: The work items.
        desc: Label for the optional progress bar.

    Returns:
        The list of results, aligned with ``items``.
    """
    work = list(items)
    settings = get_settings()
    workers = min(worker_count(settings), max(len(work), 1))
    bar = tqdm(total=len(work), desc=desc, disable=not settings.progress, ascii=True, dynamic_ncols=True)
    try:
        if workers <= 1:
            results = []
            for item in work:
                results.append(fn(item))
                bar.update(1)
            return results
        logger.debug("Running %d tasks on %d threads", len(work), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = []
            for result in pool.map(fn, work):
                results.append(result)
                bar.update(1)
            return results
    finally:
        bar.close()
