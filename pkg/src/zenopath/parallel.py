"""Thread-pool helpers for embarrassingly parallel ensembles.

Worker count comes from the ZENO_THREADS environment variable (default 1,
serial). Results are always returned in input order regardless of
completion order, so parallel runs are bit-identical to serial ones.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")


def worker_count(max_workers: int | None = None) -> int:
    if max_workers is not None:
        return max(1, int(max_workers))
    raw = os.environ.get("ZENO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def map_indexed(fn: Callable[[int], T], indices: Iterable[int], max_workers: int | None = None) -> list[T]:
    """Apply fn to each index; output order follows input order."""
    idx = list(indices)
    n = worker_count(max_workers)
    if n == 1 or len(idx) <= 1:
        return [fn(i) for i in idx]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, idx))
