"""Order-preserving map over a process pool.

The worker count comes from ``WHITTAKER_LAB_THREADS`` (default 1, i.e. run
serially in-process).  Results are always returned in input order, so reports
do not depend on completion order.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "WHITTAKER_LAB_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}") from None
    return max(1, n)


def pmap(func: Callable[[T], R], items: Iterable[T]) -> list[R]:
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
