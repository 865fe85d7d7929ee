"""Benchmarked kernels (BFS, SSSP, PageRank), serial references and validators."""

from .bfs import (
    DIRECTION_OPTIMIZING,
    TOP_DOWN,
    UNREACHED,
    BfsParams,
    ParentArray,
    bfs,
    bfs_levels_serial,
    tree_levels,
)
from .pagerank import PageRankParams, RankVector, pagerank
from .sssp import DistArray, SsspParams, sssp, sssp_oracle_dijkstra
from .validate import Validation, validate_bfs_tree, validate_distances, validate_ranks

__all__ = [
    "DIRECTION_OPTIMIZING",
    "TOP_DOWN",
    "UNREACHED",
    "BfsParams",
    "DistArray",
    "PageRankParams",
    "ParentArray",
    "RankVector",
    "SsspParams",
    "Validation",
    "bfs",
    "bfs_levels_serial",
    "pagerank",
    "sssp",
    "sssp_oracle_dijkstra",
    "tree_levels",
    "validate_bfs_tree",
    "validate_distances",
    "validate_ranks",
]
