"""Small shared helpers: thread-count policy and deterministic parallel map."""

import os
from concurrent.futures import ThreadPoolExecutor

_ENV_VAR = "CURVESTAT_THREADS"


def thread_count():
    """Worker count for parallel loops, capped by the CURVESTAT_THREADS env var.

    Unset or "0" means auto (one worker per CPU).
    """
    raw = os.environ.get(_ENV_VAR, "0").strip()
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    auto = os.cpu_count() or 1
    if cap <= 0:
        return auto
    return min(cap, auto)


def parallel_map(fn, items):
    """Map ``fn`` over ``items``, preserving order.

    Results are returned in input order no matter how work is scheduled, so
    downstream reductions stay deterministic.  Falls back to a plain loop
    when only one worker is allowed.
    """
    items = list(items)
    workers = min(thread_count(), max(1, len(items)))
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
