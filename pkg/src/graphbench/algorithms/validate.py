"""Result validators, run outside timed regions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import CsrGraph
from .bfs import UNREACHED, bfs_levels_serial, tree_levels


@dataclass(frozen=True)
class Validation:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


PASS = Validation(True)


def validate_bfs_tree(g: CsrGraph, root: int, parents) -> Validation:
    """Graph500-style check of a BFS parent array.

    Passes iff every tree arc ``parent[v] -> v`` exists in ``g``, tree
    depths agree with BFS layering (no graph arc from a reached vertex
    skips a level), and the reached set equals the set reachable from root.
    """
    parent = np.asarray(getattr(parents, "parent", parents), dtype=np.int64)
    n = g.num_vertices
    if parent.shape != (n,):
        return Validation(False, f"parent array has shape {parent.shape}, expected ({n},)")
    if not 0 <= root < n:
        return Validation(False, "root out of range")
    if parent[root] != root:
        return Validation(False, "root not self-parented")
    selfp = np.flatnonzero(parent == np.arange(n))
    if selfp.size > 1:
        return Validation(False, "multiple roots")
    if ((parent < UNREACHED) | (parent >= n)).any():
        return Validation(False, "parent id out of range")

    reached = parent != UNREACHED
    tree_v = np.flatnonzero(reached)
    tree_v = tree_v[tree_v != root]
    if not g.has_arcs(parent[tree_v], tree_v).all():
        return Validation(False, "tree arc missing from graph")

    levels, ok = tree_levels(parent, root)
    if not ok:
        return Validation(False, "parent chain does not reach root")
    if (levels[tree_v] != levels[parent[tree_v]] + 1).any():
        return Validation(False, "tree arc endpoints not one level apart")

    src = g.arc_sources()
    live = reached[src]
    if not reached[g.neighbors[live]].all():
        return Validation(False, "reached set mismatch: arc leaves the tree")
    if (levels[g.neighbors[live]] > levels[src[live]] + 1).any():
        return Validation(False, "arc skips a level")

    expect = bfs_levels_serial(g, root) != UNREACHED
    if not np.array_equal(expect, reached):
        return Validation(False, "reached set mismatch")
    return PASS


def validate_distances(g: CsrGraph, root: int, dist, rtol: float = 1e-12) -> Validation:
    """Certificate check for shortest-path distances.

    Distances are exact iff ``dist[root] == 0``, no arc can relax a finite
    distance, and every other finite vertex has an in-arc that attains it.
    """
    dist = np.asarray(getattr(dist, "dist", dist), dtype=np.float64)
    if dist.shape != (g.num_vertices,):
        return Validation(False, "distance array has wrong shape")
    if dist[root] != 0:
        return Validation(False, "dist[root] != 0")
    if (dist < 0).any() or np.isnan(dist).any():
        return Validation(False, "negative or NaN distance")
    src = g.arc_sources()
    via = dist[src] + g.weights
    tol = rtol * np.maximum(np.abs(via), 1.0)
    finite = np.isfinite(dist[src])
    if (via[finite] < dist[g.neighbors[finite]] - tol[finite]).any():
        return Validation(False, "arc violates triangle inequality")
    best = np.full(g.num_vertices, np.inf)
    np.minimum.at(best, g.neighbors[finite], via[finite])
    best[root] = 0.0
    fin = np.isfinite(dist)
    if not np.array_equal(fin, np.isfinite(best)):
        return Validation(False, "reached set mismatch")
    if (np.abs(best[fin] - dist[fin]) > rtol * np.maximum(np.abs(dist[fin]), 1.0)).any():
        return Validation(False, "distance not attained by any in-arc")
    return PASS


def validate_ranks(ranks, atol: float = 1e-6) -> Validation:
    p = np.asarray(getattr(ranks, "p", ranks))
    if (p < 0).any():
        return Validation(False, "negative rank")
    if abs(p.sum() - 1.0) > atol:
        return Validation(False, f"ranks sum to {p.sum()!r}")
    return PASS
