"""Edge lists, CSR graphs and the CSR construction kernel."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidStateError, MalformedInputError

VERTEX_DTYPE = np.int64


def _frozen(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EdgeList:
    """Raw edge tuples as produced by a generator or parser.

    Duplicates and self-loops are allowed. ``weights`` is either ``None`` or
    holds one non-negative weight per edge.
    """

    num_vertices: int
    src: np.ndarray
    dst: np.ndarray
    weights: np.ndarray | None = None
    directed: bool = False

    def __post_init__(self):
        src = _frozen(self.src, VERTEX_DTYPE)
        dst = _frozen(self.dst, VERTEX_DTYPE)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "num_vertices", int(self.num_vertices))
        object.__setattr__(self, "directed", bool(self.directed))
        if src.ndim != 1 or src.shape != dst.shape:
            raise MalformedInputError("src and dst must be 1-d arrays of equal length")
        if self.num_vertices < 0:
            raise MalformedInputError("num_vertices must be non-negative")
        if src.size:
            lo = min(src.min(), dst.min())
            hi = max(src.max(), dst.max())
            if lo < 0 or hi >= self.num_vertices:
                bad = int(hi if hi >= self.num_vertices else lo)
                raise MalformedInputError(
                    f"vertex id {bad} outside [0, {self.num_vertices})"
                )
        if self.weights is not None:
            w = _frozen(self.weights, np.float64)
            if w.shape != src.shape:
                raise MalformedInputError("weights must have one entry per edge")
            if w.size and not (w >= 0).all():
                raise MalformedInputError("weights must be non-negative")
            object.__setattr__(self, "weights", w)

    @classmethod
    def from_pairs(cls, num_vertices, pairs, weights=None, directed=False):
        arr = np.asarray(list(pairs), dtype=VERTEX_DTYPE).reshape(-1, 2)
        return cls(num_vertices, arr[:, 0], arr[:, 1], weights, directed)

    @property
    def num_edges(self) -> int:
        return int(self.src.size)

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    @property
    def edges(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` array."""
        return np.stack([self.src, self.dst], axis=1)

    def without_weights(self) -> EdgeList:
        if self.weights is None:
            return self
        return EdgeList(self.num_vertices, self.src, self.dst, None, self.directed)

    def __eq__(self, other):
        if not isinstance(other, EdgeList):
            return NotImplemented
        if (self.num_vertices, self.directed) != (other.num_vertices, other.directed):
            return False
        if not (np.array_equal(self.src, other.src) and np.array_equal(self.dst, other.dst)):
            return False
        if (self.weights is None) != (other.weights is None):
            return False
        if self.weights is None:
            return True
        # bitwise comparison so that -0.0/0.0 and NaN payloads are distinguished
        return np.array_equal(self.weights.view(np.uint64), other.weights.view(np.uint64))

    __hash__ = None

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        w = ", weighted" if self.weighted else ""
        return f"EdgeList(n={self.num_vertices}, m={self.num_edges}, {kind}{w})"


@dataclass(frozen=True, eq=False)
class CsrGraph:
    """Immutable compressed-sparse-row graph.

    Neighbor lists are sorted ascending. For undirected graphs every arc is
    stored in both directions, so ``num_edges`` counts arcs, not edges.
    ``in_csr`` mirrors incoming arcs of a directed graph; undirected graphs
    use themselves (see :attr:`incoming`).
    """

    num_vertices: int
    offsets: np.ndarray
    neighbors: np.ndarray
    weights: np.ndarray | None = None
    directed: bool = False
    in_csr: CsrGraph | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "offsets", _frozen(self.offsets, VERTEX_DTYPE))
        object.__setattr__(self, "neighbors", _frozen(self.neighbors, VERTEX_DTYPE))
        if self.weights is not None:
            object.__setattr__(self, "weights", _frozen(self.weights, np.float64))

    @property
    def num_edges(self) -> int:
        return int(self.neighbors.size)

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def incoming(self) -> CsrGraph:
        """CSR of incoming arcs: ``incoming.neighbors`` of v are the sources u of arcs u->v."""
        if not self.directed:
            return self
        if self.in_csr is None:
            raise InvalidStateError(
                "directed graph has no in_csr; build it with build_csr(..., with_in_csr=True) "
                "or attach_in_csr()"
            )
        return self.in_csr

    def neighbors_of(self, v) -> np.ndarray:
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]

    def arc_sources(self) -> np.ndarray:
        """Source vertex of every stored arc, aligned with ``neighbors``."""
        return np.repeat(np.arange(self.num_vertices, dtype=VERTEX_DTYPE), self.degrees)

    def has_arcs(self, src, dst) -> np.ndarray:
        """Vectorized membership test for arcs ``src[i] -> dst[i]``."""
        src = np.asarray(src, dtype=VERTEX_DTYPE)
        dst = np.asarray(dst, dtype=VERTEX_DTYPE)
        out = np.zeros(src.shape, dtype=bool)
        ok = (src >= 0) & (src < self.num_vertices) & (dst >= 0) & (dst < self.num_vertices)
        if not ok.any() or self.num_edges == 0:
            return out
        s, d = src[ok], dst[ok]
        lo = self.offsets[s]
        hi = self.offsets[s + 1]
        # neighbor rows are sorted, so (row, neighbor) keys are globally sorted
        keys = self.arc_sources() * self.num_vertices + self.neighbors
        pos = np.searchsorted(keys, s * self.num_vertices + d)
        found = (pos < hi) & (pos >= lo)
        found[found] = self.neighbors[pos[found]] == d[found]
        out[ok] = found
        return out

    def to_arcs(self) -> np.ndarray:
        """Flatten back to an ``(num_edges, 2)`` array of arcs in CSR order."""
        return np.stack([self.arc_sources(), self.neighbors], axis=1)

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"CsrGraph(n={self.num_vertices}, arcs={self.num_edges}, {kind})"


def _csr_from_arcs(n, src, dst, w, dedupe, directed):
    if n and n > (np.iinfo(np.int64).max // max(n, 1)):
        order = np.lexsort((w, dst, src)) if w is not None else np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        same = (src[1:] == src[:-1]) & (dst[1:] == dst[:-1])
    else:
        key = src * n + dst
        if w is not None:
            order = np.lexsort((w, key))
        else:
            order = np.argsort(key, kind="stable")
        key = key[order]
        src, dst = src[order], dst[order]
        same = key[1:] == key[:-1]
    if w is not None:
        w = w[order]
    if dedupe and same.size:
        # rows are sorted by weight within equal keys, so the first copy is the lightest
        keep = np.concatenate(([True], ~same))
        src, dst = src[keep], dst[keep]
        if w is not None:
            w = w[keep]
    counts = np.bincount(src, minlength=n) if src.size else np.zeros(n, dtype=VERTEX_DTYPE)
    offsets = np.zeros(n + 1, dtype=VERTEX_DTYPE)
    np.cumsum(counts, out=offsets[1:])
    return CsrGraph(n, offsets, dst, w, directed)


def build_csr(
    edges: EdgeList,
    dedupe: bool = True,
    drop_self_loops: bool = False,
    with_in_csr: bool = False,
) -> CsrGraph:
    """Build the canonical CSR for ``edges``.

    Undirected inputs produce both arc directions. With ``dedupe`` parallel
    arcs are collapsed, keeping the minimum weight. ``with_in_csr`` also
    builds the reverse CSR for directed graphs.
    """
    if not isinstance(edges, EdgeList):
        raise MalformedInputError("build_csr expects an EdgeList")
    n = edges.num_vertices
    src, dst, w = edges.src, edges.dst, edges.weights
    if drop_self_loops:
        keep = src != dst
        src, dst = src[keep], dst[keep]
        if w is not None:
            w = w[keep]
    if not edges.directed:
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
        if w is not None:
            w = np.concatenate([w, w])
    g = _csr_from_arcs(n, src, dst, w, dedupe, edges.directed)
    if with_in_csr and edges.directed:
        g = attach_in_csr(g)
    return g


def transpose(g: CsrGraph) -> CsrGraph:
    """Reverse every arc of ``g``."""
    src = g.arc_sources()
    return _csr_from_arcs(g.num_vertices, g.neighbors, src, g.weights, False, g.directed)


def attach_in_csr(g: CsrGraph) -> CsrGraph:
    """Return a copy of ``g`` carrying its reverse CSR (no-op for undirected graphs)."""
    if not g.directed or g.in_csr is not None:
        return g
    return CsrGraph(g.num_vertices, g.offsets, g.neighbors, g.weights, True, transpose(g))


def degree(g: CsrGraph, v) -> int:
    if not 0 <= v < g.num_vertices:
        raise MalformedInputError(f"vertex {v} outside [0, {g.num_vertices})")
    return int(g.offsets[v + 1] - g.offsets[v])


def degree_histogram(g: CsrGraph) -> np.ndarray:
    """``hist[k]`` = number of vertices with out-degree ``k``."""
    return np.bincount(g.degrees, minlength=1)
