"""Colexicographic enumeration of r-subsets of {0, ..., n-1}.

Colex order compares subsets by their largest element first, so all subsets
contained in {0, ..., c-1} precede every subset whose maximum is c.  This is
the fixed enumeration order used by every subset sweep in the library: the
deterministic-reduction contract relies on all callers agreeing on it.
"""

from __future__ import annotations

from math import comb
from typing import Iterator

import numpy as np

CHUNK = 4096


def colex_rank(subset) -> int:
    """Rank of a sorted subset in colex order."""
    return sum(comb(c, i + 1) for i, c in enumerate(subset))


def colex_unrank(rank: int, n: int, r: int) -> tuple[int, ...]:
    """Subset of {0..n-1} of size r with the given colex rank."""
    out = [0] * r
    k = r
    while k > 0:
        # largest c with comb(c, k) <= rank, found by descending scan
        c = n - 1
        while comb(c, k) > rank:
            c -= 1
        rank -= comb(c, k)
        k -= 1
        out[k] = c
        n = c
    return tuple(out)


def iter_colex(n: int, r: int) -> Iterator[tuple[int, ...]]:
    """Yield all r-subsets of {0..n-1} in colex order."""
    if r == 0:
        yield ()
        return
    if r > n:
        return
    for c in range(r - 1, n):
        for rest in iter_colex(c, r - 1):
            yield rest + (c,)


def iter_chunks(n: int, r: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Yield (c, r) integer arrays of consecutive colex subsets.

    Every chunk except possibly the last has exactly ``chunk`` rows; chunk
    boundaries depend only on (n, r, chunk), never on the consumer.
    """
    buf: list[tuple[int, ...]] = []
    for subset in iter_colex(n, r):
        buf.append(subset)
        if len(buf) == chunk:
            yield np.array(buf, dtype=np.int64)
            buf = []
    if buf:
        yield np.array(buf, dtype=np.int64)


def all_subsets(n: int, r: int) -> np.ndarray:
    """All r-subsets in colex order as one (comb(n, r), r) array."""
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(iter_colex(n, r)), dtype=np.int64)
