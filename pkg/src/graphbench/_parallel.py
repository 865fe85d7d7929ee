"""Per-invocation worker pools.

Kernels split work into contiguous chunks and merge the results in chunk
order, so the merged output never depends on which thread ran which chunk.
Numpy releases the GIL inside its inner loops, which is where the time goes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

# below this many items a chunk is not worth a thread hand-off
MIN_CHUNK = 2048


class Workers:
    def __init__(self, pool, n):
        self._pool = pool
        self.n = n

    def map_ranges(self, fn, total, min_chunk=MIN_CHUNK):
        """Call ``fn(lo, hi)`` over a contiguous split of ``range(total)``; results in order."""
        k = max(1, min(self.n, total // min_chunk))
        if k == 1 or self._pool is None:
            return [fn(0, total)]
        bounds = np.linspace(0, total, k + 1).astype(np.int64)
        futs = [self._pool.submit(fn, int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:])]
        return [f.result() for f in futs]

    def map(self, fn, items):
        if self._pool is None or len(items) <= 1:
            return [fn(x) for x in items]
        return list(self._pool.map(fn, items))


@contextmanager
def workers(n: int):
    n = int(n)
    if n < 1:
        raise ValueError(f"worker count must be >= 1, got {n}")
    if n == 1:
        yield Workers(None, 1)
        return
    with ThreadPoolExecutor(max_workers=n, thread_name_prefix="graphbench") as pool:
        yield Workers(pool, n)


def gather_rows(offsets, neighbors, rows):
    """Concatenate adjacency rows; returns ``(owner_index, neighbor)`` arrays.

    ``owner_index[i]`` is the position in ``rows`` whose list produced ``neighbor[i]``.
    """
    lo = offsets[rows]
    cnt = offsets[rows + 1] - lo
    total = int(cnt.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    owner = np.repeat(np.arange(rows.size, dtype=np.int64), cnt)
    start = np.cumsum(cnt) - cnt
    pos = np.arange(total, dtype=np.int64) - start[owner] + lo[owner]
    return owner, neighbors[pos]
