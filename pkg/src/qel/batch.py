"""Run seeded trials, optionally on a thread pool, with a deterministic merge."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

from . import sampling

T = TypeVar("T")


def thread_count(default: int = 1) -> int:
    """Worker count from ``QEL_THREADS`` (at least 1)."""
    raw = os.environ.get("QEL_THREADS")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def run_trials(fn: Callable[[np.random.Generator, int], T], trials: int, seed: int,
               *key: int, threads: int | None = None) -> list[T]:
    """``[fn(rng(seed, *key, i), i) for i in range(trials)]``.

    Each trial owns an independent generator, so the result list is the
    same whatever the number of threads.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    threads = thread_count() if threads is None else max(1, threads)

    def one(i: int) -> T:
        return fn(sampling.rng(seed, *key, i), i)

    if threads == 1:
        return [one(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(trials)))
