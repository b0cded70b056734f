"""Small shared utilities."""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    """Worker cap from TROPEHRHART_THREADS (default 1)."""
    raw = os.environ.get("TROPEHRHART_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def pmap(fn, items):
    """Map fn over items, using a thread pool when more than one worker is allowed."""
    workers = worker_count()
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
