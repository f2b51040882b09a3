"""Range partitioning and ordered fan-out over worker processes."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1


def partition(lo: int, hi: int, parts: int, step: int = 1, align: int = 1) -> list[tuple[int, int]]:
    """Split [lo, hi] into at most ``parts`` contiguous pieces.

    Piece boundaries stay on the lattice lo + k*step and, where possible,
    on multiples of ``align`` integers, so every element lands in exactly one piece.
    """
    count = (hi - lo) // step + 1
    parts = max(1, min(parts, count))
    per = -(-count // parts)
    if align > 1:
        per = -(-per * step // align) * align // step or 1
    out = []
    for k in range(0, count, per):
        a = lo + k * step
        b = lo + min(count - 1, k + per - 1) * step
        out.append((a, b))
    return out


def ordered_map(fn: Callable[..., T], jobs: Sequence[tuple], threads: int = 1) -> list[T]:
    """Apply fn to each argument tuple; results come back in job order."""
    if threads <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
        return list(pool.map(fn, *zip(*jobs)))
