"""Graph500-style Kronecker generation, weight assignment and root selection.

All randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence``. Edge tuples are produced in fixed-size blocks, block ``b``
drawing from ``SeedSequence((seed, STREAM_EDGES, b))``, so the output does not
depend on how many workers generate it.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InfeasibleError, InvalidStateError, MalformedInputError
from .graph import CsrGraph, EdgeList

BLOCK_SIZE = 1 << 16

# spawn keys for the independent streams derived from one user seed
STREAM_EDGES = 0
STREAM_PERMUTATION = 1
STREAM_WEIGHTS = 2
STREAM_ROOTS = 3

_SEED_MASK = (1 << 64) - 1


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator for ``seed`` on the sub-stream identified by ``stream``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & _SEED_MASK, *stream])))


@dataclass(frozen=True)
class KroneckerSpec:
    scale: int
    edge_factor: int = 16
    a: float = 0.57
    b: float = 0.19
    c: float = 0.19
    d: float = 0.05
    seed: int = 1
    permute: bool = True

    def __post_init__(self):
        if int(self.scale) != self.scale or self.scale < 1:
            raise MalformedInputError("scale must be an integer >= 1")
        if int(self.edge_factor) != self.edge_factor or self.edge_factor < 1:
            raise MalformedInputError("edge_factor must be a positive integer")
        probs = (self.a, self.b, self.c, self.d)
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise MalformedInputError("initiator probabilities must lie in [0, 1]")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise MalformedInputError(f"initiator probabilities sum to {sum(probs)!r}, not 1")
        if self.scale > 62 or self.edge_factor > (1 << 62) >> self.scale:
            raise CapacityError(
                f"scale {self.scale} with edge factor {self.edge_factor} overflows 64-bit indices"
            )

    @property
    def num_vertices(self) -> int:
        return 1 << self.scale

    @property
    def num_tuples(self) -> int:
        return self.edge_factor << self.scale

    @property
    def probabilities(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    seed: int

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(int(r) for r in self.roots)

    def __getitem__(self, i):
        return self.roots[i]


def _block_quadrants(spec: KroneckerSpec, block: int, count: int) -> np.ndarray:
    """Quadrant choices (0=A, 1=B, 2=C, 3=D) for one block, shape ``(count, scale)``."""
    rng = make_rng(spec.seed, STREAM_EDGES, block)
    u = rng.random((count, spec.scale))
    cuts = np.cumsum(spec.probabilities[:3])
    # side="right" sends u == cut to the next quadrant, so zero-probability cells never fire
    return np.searchsorted(cuts, u, side="right").astype(np.int8)


def _block_edges(spec: KroneckerSpec, block: int, count: int):
    q = _block_quadrants(spec, block, count)
    # quadrant B sets the column bit, C the row bit, D both
    row_bits = (q >= 2).astype(np.int64)
    col_bits = (q & 1).astype(np.int64)
    weights = np.left_shift(np.int64(1), np.arange(spec.scale - 1, -1, -1, dtype=np.int64))
    return row_bits @ weights, col_bits @ weights


def _blocks(spec: KroneckerSpec):
    total = spec.num_tuples
    return [(b, min(BLOCK_SIZE, total - b * BLOCK_SIZE)) for b in range(-(-total // BLOCK_SIZE))]


def kronecker_quadrant_trace(spec: KroneckerSpec) -> np.ndarray:
    """Recursion trace of :func:`generate_kronecker`: the quadrant picked at each level.

    Returned with shape ``(num_tuples, scale)``; intended for testing the
    generator's distribution.
    """
    return np.concatenate([_block_quadrants(spec, b, n) for b, n in _blocks(spec)])


def vertex_permutation(spec: KroneckerSpec) -> np.ndarray:
    return make_rng(spec.seed, STREAM_PERMUTATION).permutation(spec.num_vertices)


def generate_kronecker(spec: KroneckerSpec, workers: int = 1) -> EdgeList:
    """Generate ``edge_factor * 2**scale`` undirected Kronecker edge tuples.

    Each tuple descends ``scale`` levels of the 2x2 initiator matrix; labels
    are then scrambled by a seeded permutation unless ``spec.permute`` is off.
    """
    blocks = _blocks(spec)
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda bn: _block_edges(spec, *bn), blocks))
    else:
        parts = [_block_edges(spec, b, n) for b, n in blocks]
    src = np.concatenate([p[0] for p in parts])
    dst = np.concatenate([p[1] for p in parts])
    if spec.permute:
        perm = vertex_permutation(spec)
        src, dst = perm[src], perm[dst]
    return EdgeList(spec.num_vertices, src, dst, None, directed=False)


def assign_weights(edges: EdgeList, seed: int) -> EdgeList:
    """Attach independent uniform [0, 1) weights; weight ``i`` depends only on ``(seed, i)``."""
    if edges.weighted:
        raise InvalidStateError("edge list already carries weights")
    w = make_rng(seed, STREAM_WEIGHTS).random(edges.num_edges)
    return EdgeList(edges.num_vertices, edges.src, edges.dst, w, edges.directed)


def select_roots(g: CsrGraph, count: int = 32, seed: int = 1) -> RootSet:
    """Draw ``count`` distinct roots of degree > 1 by rejection sampling over vertex ids."""
    if count < 0:
        raise MalformedInputError("count must be non-negative")
    deg = g.degrees
    eligible = int(np.count_nonzero(deg > 1))
    if eligible < count:
        raise InfeasibleError(
            f"need {count} roots of degree > 1 but only {eligible} eligible vertices exist"
        )
    rng = make_rng(seed, STREAM_ROOTS)
    roots, seen = [], set()
    while len(roots) < count:
        for v in rng.integers(0, g.num_vertices, size=max(64, 2 * count)).tolist():
            if deg[v] > 1 and v not in seen:
                seen.add(v)
                roots.append(v)
                if len(roots) == count:
                    break
    return RootSet(np.asarray(roots, dtype=np.int64), seed)
