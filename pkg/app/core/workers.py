import logging
import os
from multiprocessing import Pool
from typing import Callable, Iterable, List, Optional

import app_constants

logger = logging.getLogger(__name__)


def worker_count(override: Optional[int] = None) -> int:
    if override is not None:
        return max(1, override)
    raw = os.environ.get(app_constants.THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", app_constants.THREADS_ENV, raw)
        return 1


def parallel_map(fn: Callable, items: Iterable, workers: Optional[int] = None) -> List:
    """
    Ordered map. Runs in-process unless TORUSINV_THREADS (or ``workers``) asks for more
    than one worker; results keep input order either way.
    """
    items = list(items)
    count = min(worker_count(workers), len(items))
    if count <= 1:
        return [fn(x) for x in items]
    logger.debug("mapping %d jobs over %d workers", len(items), count)
    with Pool(count) as pool:
        return pool.map(fn, items)
