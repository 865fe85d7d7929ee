"""Pull-style PageRank power iteration with an L1 stopping rule."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._parallel import workers as _workers
from ..errors import MalformedInputError
from ..graph import CsrGraph

# Fixed reduction blocks: partial sums are formed per block and combined in
# block order, so every float sum is identical for any worker count.
REDUCTION_BLOCK = 4096


@dataclass(frozen=True)
class PageRankParams:
    epsilon: float = 6e-8
    damping: float = 0.85
    max_iters: int = 1000

    def __post_init__(self):
        if not self.epsilon > 0:
            raise MalformedInputError("epsilon must be positive")
        if not 0 < self.damping < 1:
            raise MalformedInputError("damping must lie in (0, 1)")
        if self.max_iters < 1:
            raise MalformedInputError("max_iters must be >= 1")


@dataclass(frozen=True, eq=False)
class RankVector:
    p: np.ndarray
    iterations: int
    converged: bool
    final_delta: float
    # per-iteration diagnostics: L1 change and total rank mass
    deltas: list = field(default_factory=list, repr=False)
    mass: list = field(default_factory=list, repr=False)


def _blocks(n):
    return [(lo, min(lo + REDUCTION_BLOCK, n)) for lo in range(0, n, REDUCTION_BLOCK)]


def pagerank(g: CsrGraph, params: PageRankParams = PageRankParams(), workers: int = 1) -> RankVector:
    """Iterate ``p_k <- (1-d)/n + d * (sum_{j->k} p_j/outdeg(j) + dangling/n)``.

    Starts from the uniform vector and stops once the L1 change between
    successive iterates drops below ``epsilon``. Mass held by vertices with
    no out-arcs is spread uniformly, so ranks keep summing to one.
    """
    n = g.num_vertices
    if n < 1:
        raise MalformedInputError("PageRank needs at least one vertex")
    inc = g.incoming
    outdeg = g.degrees.astype(np.float64)
    dangling = outdeg == 0
    inv_out = np.divide(1.0, outdeg, out=np.zeros(n), where=~dangling)
    d = params.damping
    base = (1.0 - d) / n
    blocks = _blocks(n)
    # local row index of every in-arc, per block, built once
    rows = [np.repeat(np.arange(hi - lo), np.diff(inc.offsets[lo:hi + 1])) for lo, hi in blocks]

    p = np.full(n, 1.0 / n)
    nxt = np.empty(n)
    deltas, mass = [], []
    converged = False
    delta = np.inf
    it = 0
    with _workers(workers) as pool:
        while it < params.max_iters:
            contrib = p * inv_out
            leak = sum(pool.map(lambda b: p[b[0]:b[1]][dangling[b[0]:b[1]]].sum(), blocks))
            teleport = base + d * leak / n

            def pull(k):
                lo, hi = blocks[k]
                a, z = inc.offsets[lo], inc.offsets[hi]
                s = np.bincount(rows[k], weights=contrib[inc.neighbors[a:z]], minlength=hi - lo)
                new = teleport + d * s
                nxt[lo:hi] = new
                return np.abs(new - p[lo:hi]).sum(), new.sum()

            parts = pool.map(pull, range(len(blocks)))
            delta = float(sum(x[0] for x in parts))
            p, nxt = nxt, p
            it += 1
            deltas.append(delta)
            mass.append(float(sum(x[1] for x in parts)))
            if delta < params.epsilon:
                converged = True
                break
    return RankVector(p.copy(), it, converged, delta, deltas, mass)
