import sys
from pathlib import Path

import numpy as np
import pytest

from graphbench import EdgeList, KroneckerSpec, assign_weights, build_csr, generate_kronecker

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def path3():
    """Undirected path 0-1-2."""
    return EdgeList.from_pairs(3, [(0, 1), (1, 2)])


@pytest.fixture
def path3_with_isolated():
    return EdgeList.from_pairs(4, [(0, 1), (1, 2)])


@pytest.fixture(scope="session")
def kron10():
    return generate_kronecker(KroneckerSpec(10, seed=1))


@pytest.fixture(scope="session")
def kron10_graph(kron10):
    return build_csr(kron10, drop_self_loops=True)


@pytest.fixture(scope="session")
def kron10_weighted_graph(kron10):
    return build_csr(assign_weights(kron10, 7), drop_self_loops=True)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def random_edge_list(rng, n_max=40, m_max=120, weighted=None, directed=None):
    n = int(rng.integers(1, n_max))
    m = int(rng.integers(0, m_max))
    if weighted is None:
        weighted = bool(rng.integers(2))
    if directed is None:
        directed = bool(rng.integers(2))
    src = rng.integers(0, n, m)
    dst = rng.integers(0, n, m)
    w = rng.random(m) * 10 if weighted else None
    return EdgeList(n, src, dst, w, directed)
