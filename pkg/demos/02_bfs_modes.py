"""Top-down vs direction-optimizing BFS on the same roots."""

import time

import numpy as np

from graphbench import KroneckerSpec, build_csr, generate_kronecker, select_roots
from graphbench.algorithms import DIRECTION_OPTIMIZING, BfsParams, bfs, validate_bfs_tree

g = build_csr(generate_kronecker(KroneckerSpec(14, seed=2)), drop_self_loops=True)
roots = select_roots(g, 8, seed=2)

for root in roots:
    t0 = time.perf_counter()
    td = bfs(g, root)
    t1 = time.perf_counter()
    do = bfs(g, root, BfsParams(mode=DIRECTION_OPTIMIZING))
    t2 = time.perf_counter()
    same = np.array_equal(td.levels(), do.levels())
    print(f"root {root:6d}  td {t1 - t0:.4f}s  do {t2 - t1:.4f}s  steps {''.join(s[0] for s in do.steps)}"
          f"  levels equal: {same}  valid: {bool(validate_bfs_tree(g, root, do))}")

# steps: t = top-down level, b = bottom-up level
