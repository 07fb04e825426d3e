"""Parallel for loops over index ranges and sequences.

Iterations are bundled into contiguous batches, one pool task per batch,
so short loop bodies do not pay a queue round trip each.  Keeping more
batches than workers still lets idle workers pick up the slack when some
iterations are slower than others.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterator, Optional, Sequence

__all__ = [
    "BATCHES_PER_WORKER",
    "BatchPlan",
    "auto_batch_count",
    "make_plan",
    "parallel_for",
    "parallel_for_each",
]

BATCHES_PER_WORKER = 8


def auto_batch_count(n_iterations: int, n_workers: int) -> int:
    """Default number of batches: 8 per worker, at most one per iteration."""
    if n_iterations < 0 or n_workers < 0:
        raise ValueError("n_iterations and n_workers must be non-negative")
    return min(max(BATCHES_PER_WORKER * max(n_workers, 1), 1), max(n_iterations, 1))


@dataclass(frozen=True)
class BatchPlan:
    """Balanced split of the half-open range ``[begin, end)``.

    ``boundaries`` has ``n_batches + 1`` entries; batch ``k`` covers
    ``[boundaries[k], boundaries[k + 1])``.  Batch sizes differ by at most
    one.  An empty range has a single empty batch.
    """

    begin: int
    end: int
    n_batches: int
    boundaries: tuple[int, ...]

    def ranges(self) -> Iterator[tuple[int, int]]:
        """Yield the non-empty ``(lo, hi)`` batches in order."""
        b = self.boundaries
        for k in range(self.n_batches):
            if b[k] < b[k + 1]:
                yield b[k], b[k + 1]

    def __len__(self) -> int:
        return self.n_batches


def make_plan(begin: int, end: int, n_batches: int) -> BatchPlan:
    if end < begin:
        raise ValueError(f"empty range must have begin <= end, got [{begin}, {end})")
    if n_batches < 1:
        raise ValueError("n_batches must be positive")
    n = end - begin
    k = min(n_batches, max(n, 1))
    boundaries = tuple(begin + (j * n) // k for j in range(k + 1))
    return BatchPlan(begin, end, k, boundaries)


def parallel_for(begin: int, end: int, body: Callable[[int], Any],
                 n_workers: Optional[int] = None,
                 n_batches: Optional[int] = None) -> None:
    """Call ``body(i)`` for every ``i`` in ``[begin, end)`` using a fresh pool.

    Blocks until done; call it on the host thread.  ``n_workers`` defaults to
    the core count and ``n_batches`` (None or 0) to :func:`auto_batch_count`.
    Iterations run in no particular order, so ``body`` must only write to
    locations no other iteration touches.
    """
    from .pool import ThreadPool

    if end < begin:
        raise ValueError(f"begin must not exceed end, got [{begin}, {end})")
    pool = ThreadPool(n_workers)
    with pool:
        pool.parallel_for(begin, end, body, n_batches)
        pool.join()


def parallel_for_each(items: Sequence[Any], body: Callable[[Any], Any],
                      n_workers: Optional[int] = None,
                      n_batches: Optional[int] = None) -> None:
    """Apply ``body`` to every element of ``items`` using a fresh pool.

    Python has no references to list slots, so an element is updated in
    place by returning its new value from ``body``; returning None leaves
    the element as it is (useful when elements are mutable objects).
    """
    from .pool import ThreadPool

    pool = ThreadPool(n_workers)
    with pool:
        pool.parallel_for_each(items, body, n_batches)
        pool.join()
