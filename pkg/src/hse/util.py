"""Small shared utilities: the parallel map honoring HSE_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    """Parallelism cap from HSE_THREADS; 1 (serial) by default."""
    raw = os.environ.get("HSE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def pmap(fn, items):
    """Map preserving order; runs in a thread pool when HSE_THREADS > 1.

    Results are collected in submission order, so output is deterministic
    regardless of scheduling.
    """
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
