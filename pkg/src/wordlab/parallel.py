"""Chunked exhaustive counting over contiguous index ranges.

Each chunk returns a bincount; chunks merge by addition, so the result does
not depend on the number of workers or on scheduling.
"""

from __future__ import annotations

import multiprocessing as mp
from typing import Callable

import numpy as np

CHUNK = 2**18

_TASK: Callable[[int, int], np.ndarray] | None = None


def _run(bounds: tuple[int, int]) -> np.ndarray:
    return _TASK(*bounds)


def chunk_ranges(total: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(s, min(total, s + chunk)) for s in range(0, total, chunk)]


def count_chunks(task: Callable[[int, int], np.ndarray], total: int, nbins: int,
                 workers: int = 1, chunk: int = CHUNK) -> np.ndarray:
    """Sum ``task(start, stop)`` (each a length-nbins int64 array) over [0, total)."""
    global _TASK
    ranges = chunk_ranges(total, chunk)
    counts = np.zeros(nbins, dtype=np.int64)
    if workers <= 1 or len(ranges) <= 1:
        for bounds in ranges:
            counts += task(*bounds)
        return counts
    _TASK = task
    try:
        # fork: workers inherit the task (and its group tables) without pickling
        with mp.get_context("fork").Pool(min(workers, len(ranges))) as pool:
            for part in pool.imap_unordered(_run, ranges):
                counts += part
    finally:
        _TASK = None
    return counts


def tuple_arrays(order: int, d: int, start: int, stop: int) -> list[np.ndarray]:
    """Coordinates of tuples start..stop-1 in lexicographic order (first coordinate most significant)."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = []
    for _ in range(d):
        idx, r = np.divmod(idx, order)
        out.append(r)
    return out[::-1]
