"""Delta-stepping against Dijkstra, then PageRank with its L1 stopping rule."""

import numpy as np

from graphbench import KroneckerSpec, assign_weights, build_csr, generate_kronecker, select_roots
from graphbench.algorithms import PageRankParams, SsspParams, pagerank, sssp, sssp_oracle_dijkstra

edges = assign_weights(generate_kronecker(KroneckerSpec(11, seed=3)), seed=3)
g = build_csr(edges, drop_self_loops=True)
root = int(select_roots(g, 1, seed=3)[0])

ref = sssp_oracle_dijkstra(g, root).dist
reached = np.isfinite(ref)
for delta in (0.1, 1.0, 10.0):
    res = sssp(g, root, SsspParams(delta))
    print(f"delta {delta:5}: buckets {res.buckets:4d}  max |diff| vs Dijkstra {np.abs(res.dist[reached] - ref[reached]).max():.1e}")

r = pagerank(build_csr(edges.without_weights(), drop_self_loops=True))
print("pagerank iterations:", r.iterations, "converged:", r.converged, "final L1 delta:", r.final_delta)
print("sum of ranks:", r.p.sum())
print("top 5 vertices:", np.argsort(r.p)[::-1][:5].tolist())

# a looser damping factor converges in fewer iterations
print("d=0.5 iterations:", pagerank(build_csr(edges.without_weights()), PageRankParams(damping=0.5)).iterations)
