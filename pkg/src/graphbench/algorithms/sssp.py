"""Delta-stepping single-source shortest paths and a Dijkstra reference."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .._parallel import gather_rows, workers as _workers
from ..errors import IneligibleRootError, InvalidStateError, MalformedInputError, UnsupportedInputError
from ..graph import CsrGraph


@dataclass(frozen=True)
class SsspParams:
    delta: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise MalformedInputError("delta must be positive")


@dataclass(frozen=True, eq=False)
class DistArray:
    dist: np.ndarray
    root: int
    # buckets processed, reported for diagnostics
    buckets: int = 0


def _check(g: CsrGraph, root):
    if not g.weighted:
        raise InvalidStateError("SSSP needs a weighted graph")
    if g.num_edges and not (g.weights >= 0).all():
        raise UnsupportedInputError("negative arc weight")
    if not 0 <= root < g.num_vertices:
        raise IneligibleRootError(f"root {root} outside [0, {g.num_vertices})")


def _relax(g, dist, sources, light, pool):
    """Best tentative distance per target over arcs leaving ``sources``.

    ``light`` selects arcs with weight <= delta (True), > delta (False) or
    all arcs (None). Returns ``(targets, candidate)`` with unique targets.
    """

    def part(lo, hi):
        chunk = sources[lo:hi]
        lo_ = g.offsets[chunk]
        cnt = g.offsets[chunk + 1] - lo_
        owner = np.repeat(np.arange(chunk.size), cnt)
        start = np.cumsum(cnt) - cnt
        pos = lo_[owner] + np.arange(owner.size) - start[owner]
        w = g.weights[pos]
        if light is not None:
            sel = (w <= light[1]) if light[0] else (w > light[1])
            pos, w, owner = pos[sel], w[sel], owner[sel]
        tgt = g.neighbors[pos]
        cand = dist[chunk[owner]] + w
        better = cand < dist[tgt]
        return tgt[better], cand[better]

    parts = pool.map_ranges(part, sources.size, min_chunk=256)
    tgt = np.concatenate([p[0] for p in parts])
    cand = np.concatenate([p[1] for p in parts])
    if tgt.size == 0:
        return tgt, cand
    order = np.lexsort((cand, tgt))
    tgt, cand = tgt[order], cand[order]
    first = np.concatenate(([True], tgt[1:] != tgt[:-1]))
    return tgt[first], cand[first]


def sssp(g: CsrGraph, root: int, params: SsspParams = SsspParams(), workers: int = 1) -> DistArray:
    """Delta-stepping with bucket width ``params.delta``.

    Bucket ``i`` holds vertices with tentative distance in
    ``[i*delta, (i+1)*delta)``. Light arcs (weight <= delta) are relaxed
    repeatedly until the bucket stops refilling; heavy arcs once per bucket.
    """
    _check(g, root)
    delta = float(params.delta)
    n = g.num_vertices
    dist = np.full(n, np.inf)
    dist[root] = 0.0
    pending = np.zeros(n, dtype=bool)
    pending[root] = True
    light, heavy = (True, delta), (False, delta)
    buckets = 0
    with _workers(workers) as pool:
        while pending.any():
            cand = np.flatnonzero(pending)
            bucket = np.floor(dist[cand] / delta)
            i = bucket.min()
            settled = []
            current = cand[bucket == i]
            while current.size:
                pending[current] = False
                settled.append(current)
                tgt, d = _relax(g, dist, current, light, pool)
                dist[tgt] = d
                pending[tgt] = True
                current = tgt[np.floor(d / delta) == i]
            done = np.unique(np.concatenate(settled))
            tgt, d = _relax(g, dist, done, heavy, pool)
            dist[tgt] = d
            pending[tgt] = True
            buckets += 1
    return DistArray(dist, int(root), buckets)


def sssp_oracle_dijkstra(g: CsrGraph, root: int) -> DistArray:
    """Textbook binary-heap Dijkstra, serial."""
    _check(g, root)
    off = g.offsets.tolist()
    nbr = g.neighbors.tolist()
    wts = g.weights.tolist()
    dist = [float("inf")] * g.num_vertices
    dist[root] = 0.0
    heap = [(0.0, root)]
    done = [False] * g.num_vertices
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for k in range(off[u], off[u + 1]):
            v = nbr[k]
            nd = d + wts[k]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return DistArray(np.asarray(dist), int(root))
