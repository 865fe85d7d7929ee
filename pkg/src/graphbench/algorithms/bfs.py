"""Level-synchronous BFS: top-down and direction-optimizing (top-down/bottom-up hybrid)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._parallel import gather_rows, workers as _workers
from ..errors import IneligibleRootError, MalformedInputError
from ..graph import CsrGraph

UNREACHED = -1

TOP_DOWN = "top-down"
DIRECTION_OPTIMIZING = "direction-optimizing"


@dataclass(frozen=True)
class BfsParams:
    alpha: float = 15.0
    beta: float = 18.0
    mode: str = TOP_DOWN

    def __post_init__(self):
        if not self.alpha > 0 or not self.beta > 0:
            raise MalformedInputError("alpha and beta must be positive")
        if self.mode not in (TOP_DOWN, DIRECTION_OPTIMIZING):
            raise MalformedInputError(f"unknown BFS mode {self.mode!r}")


@dataclass(frozen=True, eq=False)
class ParentArray:
    parent: np.ndarray
    root: int
    # direction used for each expanded level: "td" or "bu"
    steps: tuple = ()

    def levels(self) -> np.ndarray:
        """Hop count along the parent chain; ``UNREACHED`` where no parent."""
        lv, ok = tree_levels(self.parent, self.root)
        if not ok:
            raise MalformedInputError("parent array does not form a tree rooted at root")
        return lv

    @property
    def reached(self) -> np.ndarray:
        return self.parent != UNREACHED


def tree_levels(parent, root) -> tuple[np.ndarray, bool]:
    """Depth of every vertex in the parent forest by pointer jumping.

    Returns ``(levels, ok)``; ``ok`` is False when some reached vertex does
    not lead back to ``root`` (a cycle or a dangling parent).
    """
    parent = np.asarray(parent, dtype=np.int64)
    n = parent.size
    levels = np.full(n, UNREACHED, dtype=np.int64)
    reached = parent != UNREACHED
    if not 0 <= root < n or parent[root] != root:
        return levels, False
    if ((parent < UNREACHED) | (parent >= n)).any():
        return levels, False
    idx = np.flatnonzero(reached)
    if not reached[parent[idx]].all():
        return levels, False
    anc = parent.copy()
    depth = (reached & (np.arange(n) != root)).astype(np.int64)
    for _ in range(max(1, int(n).bit_length()) + 1):
        a = anc[idx]
        if (a == root).all():
            break
        depth[idx] += np.where(a == root, 0, depth[a])
        anc[idx] = anc[a]
    if not (anc[idx] == root).all():
        return levels, False
    levels[idx] = depth[idx]
    return levels, True


def _check_root(g: CsrGraph, root) -> int:
    if not 0 <= root < g.num_vertices:
        raise IneligibleRootError(f"root {root} outside [0, {g.num_vertices})")
    if g.offsets[root + 1] == g.offsets[root]:
        raise IneligibleRootError(f"root {root} has degree 0")
    return int(root)


def _top_down_step(g, frontier, visited, parent, pool):
    def expand(lo, hi):
        chunk = frontier[lo:hi]
        owner, nbr = gather_rows(g.offsets, g.neighbors, chunk)
        keep = ~visited[nbr]
        return nbr[keep], chunk[owner[keep]]

    parts = pool.map_ranges(expand, frontier.size, min_chunk=256)
    child = np.concatenate([p[0] for p in parts])
    par = np.concatenate([p[1] for p in parts])
    # first claim wins, in frontier order, like a serial CAS sweep
    child, first = np.unique(child, return_index=True)
    parent[child] = par[first]
    visited[child] = True
    return child


def _bottom_up_step(inc, frontier, visited, parent, pool):
    in_frontier = np.zeros(visited.size, dtype=bool)
    in_frontier[frontier] = True
    todo = np.flatnonzero(~visited)

    def search(lo, hi):
        cand = todo[lo:hi]
        pos = inc.offsets[cand]
        end = inc.offsets[cand + 1]
        live = pos < end
        cand, pos, end = cand[live], pos[live], end[live]
        found_v, found_p = [], []
        width = 1
        # scan in-neighbors in doubling windows so that most vertices stop early
        while cand.size:
            w = np.minimum(width, end - pos)
            owner = np.repeat(np.arange(cand.size), w)
            start = np.cumsum(w) - w
            idx = pos[owner] + np.arange(owner.size) - start[owner]
            src = inc.neighbors[idx]
            hit = in_frontier[src]
            hit_owner, first = np.unique(owner[hit], return_index=True)
            if hit_owner.size:
                found_v.append(cand[hit_owner])
                found_p.append(src[hit][first])
            pos = pos + w
            rest = pos < end
            rest[hit_owner] = False
            cand, pos, end = cand[rest], pos[rest], end[rest]
            width *= 2
        if found_v:
            return np.concatenate(found_v), np.concatenate(found_p)
        e = np.empty(0, dtype=np.int64)
        return e, e

    parts = pool.map_ranges(search, todo.size, min_chunk=512)
    child = np.concatenate([p[0] for p in parts])
    par = np.concatenate([p[1] for p in parts])
    order = np.argsort(child, kind="stable")
    child, par = child[order], par[order]
    parent[child] = par
    visited[child] = True
    return child


def bfs(g: CsrGraph, root: int, params: BfsParams = BfsParams(), workers: int = 1) -> ParentArray:
    """Breadth-first search from ``root`` with ``workers`` threads.

    In direction-optimizing mode a level is expanded bottom-up when the
    frontier's outgoing arcs exceed ``unexplored_arcs / alpha`` and the
    search returns to top-down once the frontier holds fewer than
    ``n / beta`` vertices.
    """
    root = _check_root(g, root)
    n = g.num_vertices
    parent = np.full(n, UNREACHED, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    parent[root] = root
    visited[root] = True
    frontier = np.array([root], dtype=np.int64)
    hybrid = params.mode == DIRECTION_OPTIMIZING
    if hybrid:
        inc = g.incoming
        deg = g.degrees
        unexplored = int(g.num_edges - deg[root])
    bottom_up = False
    steps = []
    with _workers(workers) as pool:
        while frontier.size:
            if hybrid:
                if bottom_up:
                    bottom_up = frontier.size >= n / params.beta
                else:
                    bottom_up = int(deg[frontier].sum()) > unexplored / params.alpha
            if bottom_up:
                frontier = _bottom_up_step(inc, frontier, visited, parent, pool)
                steps.append("bu")
            else:
                frontier = _top_down_step(g, frontier, visited, parent, pool)
                steps.append("td")
            if hybrid:
                unexplored -= int(deg[frontier].sum())
    return ParentArray(parent, root, tuple(steps))


def bfs_levels_serial(g: CsrGraph, root: int) -> np.ndarray:
    """Hop distances from ``root`` by plain level-by-level expansion (reference)."""
    n = g.num_vertices
    level = np.full(n, UNREACHED, dtype=np.int64)
    level[root] = 0
    frontier = np.array([root], dtype=np.int64)
    depth = 0
    while frontier.size:
        depth += 1
        _, nbr = gather_rows(g.offsets, g.neighbors, frontier)
        nbr = np.unique(nbr)
        nbr = nbr[level[nbr] == UNREACHED]
        level[nbr] = depth
        frontier = nbr
    return level
