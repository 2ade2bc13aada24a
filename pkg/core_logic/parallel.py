"""
Ordered data-parallel map on a thread pool.

numpy releases the GIL inside its kernels, so threads are enough for the
chunked integrand evaluations. Results always come back in input order,
which keeps every reduction independent of the worker count.
"""

import concurrent.futures as futures
import os
from typing import Callable, List, Sequence, TypeVar


T = TypeVar("T")
R = TypeVar("R")

DEFAULT_WORKERS = int(os.getenv("CASIMIR_THREADS", str(os.cpu_count() or 1)))


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int = DEFAULT_WORKERS) -> List[R]:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


def chunked(n: int, size: int) -> List[slice]:
    """Fixed-size slices covering range(n); the chunking never depends on the worker count."""
    return [slice(start, min(start + size, n)) for start in range(0, n, size)]
