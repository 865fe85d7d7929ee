"""Generate a Kronecker graph, build its CSR and look at the degree skew."""

import numpy as np

from graphbench import KroneckerSpec, build_csr, generate_kronecker, select_roots
from graphbench.graph import degree_histogram

spec = KroneckerSpec(scale=12, seed=1)
edges = generate_kronecker(spec)
print("vertices:", spec.num_vertices, "edge tuples:", edges.num_edges)

g = build_csr(edges, drop_self_loops=True)
print("arcs after dedupe:", g.num_edges)

deg = g.degrees
print("max degree:", deg.max(), "mean:", round(deg.mean(), 2), "isolated:", np.count_nonzero(deg == 0))

# heavy tail: a few hubs, many low-degree vertices
hist = degree_histogram(g)
print("vertices with degree 0..9:", hist[:10].tolist())

roots = select_roots(g, 32, seed=1)
print("first roots:", roots.roots[:8].tolist())
