"""Thread-pool map with an environment cap.

THERMOSEMI_THREADS limits the worker count for the embarrassingly parallel
loops (frequency scans, witness sweeps). Unset or 1 means run serially,
which also keeps tracebacks simple.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ValidationError


def thread_count() -> int:
    raw = os.environ.get("THERMOSEMI_THREADS")
    if raw is None or raw.strip() == "":
        return min(os.cpu_count() or 1, 8)
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError("THERMOSEMI_THREADS must be an integer, got %r" % raw)
    if n < 1:
        raise ValidationError("THERMOSEMI_THREADS must be >= 1")
    return n


def thread_map(fn, items):
    """Map preserving order; serial when one worker is requested."""
    items = list(items)
    workers = min(thread_count(), max(len(items), 1))
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
