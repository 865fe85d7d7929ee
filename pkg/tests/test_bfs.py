import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphbench import EdgeList, KroneckerSpec, attach_in_csr, build_csr, generate_kronecker, select_roots
from graphbench.algorithms import (
    DIRECTION_OPTIMIZING,
    UNREACHED,
    BfsParams,
    bfs,
    validate_bfs_tree,
)
from graphbench.errors import IneligibleRootError, InvalidStateError, MalformedInputError

from oracles import adjacency_map, fifo_bfs_levels

DO = BfsParams(mode=DIRECTION_OPTIMIZING)


def test_path_levels(path3):
    g = build_csr(path3)
    for params in (BfsParams(), DO):
        assert bfs(g, 0, params).levels().tolist() == [0, 1, 2]


def test_disconnected_vertex_unreached(path3_with_isolated):
    g = build_csr(path3_with_isolated)
    res = bfs(g, 0)
    assert res.parent[3] == UNREACHED
    assert res.parent[0] == 0


def test_root_errors(path3_with_isolated):
    g = build_csr(path3_with_isolated)
    with pytest.raises(IneligibleRootError):
        bfs(g, 3)
    with pytest.raises(IneligibleRootError):
        bfs(g, 7)


def test_params_validation():
    with pytest.raises(MalformedInputError):
        BfsParams(alpha=0)
    with pytest.raises(MalformedInputError):
        BfsParams(mode="sideways")


def test_directed_do_needs_in_csr():
    e = EdgeList.from_pairs(3, [(0, 1), (1, 2)], directed=True)
    with pytest.raises(InvalidStateError):
        bfs(build_csr(e), 0, DO)
    g = attach_in_csr(build_csr(e))
    assert bfs(g, 0, DO).levels().tolist() == [0, 1, 2]


@pytest.mark.parametrize("seed", [1, 2])
def test_kronecker_modes_match_fifo_oracle(seed):
    e = generate_kronecker(KroneckerSpec(10, seed=seed))
    g = build_csr(e, drop_self_loops=True)
    adj = adjacency_map(e.num_vertices, e.edges.tolist(), directed=False, drop_self_loops=True)
    used_bottom_up = False
    for root in select_roots(g, 32, seed):
        want = fifo_bfs_levels(adj, e.num_vertices, root)
        td = bfs(g, root)
        do = bfs(g, root, DO, workers=4)
        used_bottom_up |= "bu" in do.steps
        assert np.array_equal(td.levels(), want)
        assert np.array_equal(do.levels(), want)
        assert validate_bfs_tree(g, root, td)
        assert validate_bfs_tree(g, root, do)
    assert used_bottom_up


def test_directed_kronecker_matches_oracle():
    e = generate_kronecker(KroneckerSpec(9, seed=4))
    e = EdgeList(e.num_vertices, e.src, e.dst, None, directed=True)
    g = build_csr(e, drop_self_loops=True, with_in_csr=True)
    adj = adjacency_map(e.num_vertices, e.edges.tolist(), directed=True, drop_self_loops=True)
    for root in select_roots(g, 8, 4):
        want = fifo_bfs_levels(adj, e.num_vertices, root)
        for params in (BfsParams(), DO):
            res = bfs(g, root, params, workers=2)
            assert np.array_equal(res.levels(), want)
            assert validate_bfs_tree(g, root, res)


def test_switch_heuristic_thresholds(kron10_graph):
    g = kron10_graph
    root = int(np.argmax(g.degrees))
    # a huge alpha makes the frontier look large immediately
    eager = bfs(g, root, BfsParams(alpha=1e9, beta=1e-9, mode=DIRECTION_OPTIMIZING))
    assert eager.steps[0] == "bu"
    # a tiny alpha stays top-down while any unexplored arcs remain
    never = bfs(g, root, BfsParams(alpha=1e-9, mode=DIRECTION_OPTIMIZING))
    assert never.steps[:2] == ("td", "td")
    assert np.array_equal(eager.levels(), never.levels())


def test_levels_independent_of_workers(kron10_graph):
    g = kron10_graph
    for root in select_roots(g, 4, 2):
        base = bfs(g, root, DO, workers=1).levels()
        for n in (2, 3, 8):
            assert np.array_equal(bfs(g, root, DO, workers=n).levels(), base)
            assert np.array_equal(bfs(g, root, workers=n).levels(), base)


def test_validator_accepts_correct_tree(path3):
    g = build_csr(path3)
    assert validate_bfs_tree(g, 0, bfs(g, 0)).ok


def test_validator_multiple_roots(path3):
    g = build_csr(path3)
    parent = bfs(g, 0).parent.copy()
    parent[2] = 2
    v = validate_bfs_tree(g, 0, parent)
    assert not v.ok
    assert v.reason == "multiple roots"


@pytest.mark.parametrize(
    "mutate, reason",
    [
        (lambda p: p.__setitem__(0, 1), "root not self-parented"),
        (lambda p: p.__setitem__(2, 0), "tree arc missing from graph"),
        (lambda p: p.__setitem__(2, UNREACHED), "reached set mismatch: arc leaves the tree"),
        (lambda p: p.__setitem__(2, 9), "parent id out of range"),
    ],
)
def test_validator_reasons(path3, mutate, reason):
    g = build_csr(path3)
    parent = bfs(g, 0).parent.copy()
    mutate(parent)
    v = validate_bfs_tree(g, 0, parent)
    assert not v.ok and v.reason == reason


def test_validator_detects_cycle():
    g = build_csr(EdgeList.from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 1)]))
    parent = np.array([0, 3, 1, 2])
    assert not validate_bfs_tree(g, 0, parent)


def _graph500_ok(adj, n, root, parent):
    """Independent Graph500 checks straight from the adjacency map."""
    want = fifo_bfs_levels(adj, n, root)
    if parent[root] != root:
        return False
    if any((parent[v] == UNREACHED) != (want[v] < 0) for v in range(n)):
        return False
    for v in range(n):
        if v == root or parent[v] == UNREACHED:
            continue
        p = int(parent[v])
        if not 0 <= p < n or v not in adj[p] or want[p] != want[v] - 1:
            return False
    return True


def test_validator_perturbation_fuzz():
    e = generate_kronecker(KroneckerSpec(8, seed=6))
    g = build_csr(e, drop_self_loops=True)
    adj = adjacency_map(e.num_vertices, e.edges.tolist(), directed=False, drop_self_loops=True)
    adj_sets = {u: set(vs) for u, vs in adj.items()}
    rng = np.random.default_rng(0)
    roots = select_roots(g, 8, 6)
    broke = 0
    for trial in range(300):
        root = int(roots[trial % len(roots)])
        parent = bfs(g, root).parent.copy()
        for _ in range(int(rng.integers(1, 3))):
            v = int(rng.integers(e.num_vertices))
            choice = rng.integers(3)
            if choice == 0:
                parent[v] = UNREACHED if v != root else parent[v]
            elif choice == 1 and adj[v]:
                parent[v] = int(rng.choice(adj[v]))
            else:
                parent[v] = int(rng.integers(e.num_vertices))
        expect = _graph500_ok(adj_sets, e.num_vertices, root, parent)
        got = validate_bfs_tree(g, root, parent).ok
        assert got == expect, (trial, root)
        broke += not expect
    assert broke > 50


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 25).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=1, max_size=60),
            st.booleans(),
        )
    )
)
def test_bfs_properties(case):
    n, pairs, directed = case
    e = EdgeList.from_pairs(n, pairs, directed=directed)
    g = build_csr(e, with_in_csr=True)
    adj = adjacency_map(n, pairs, directed)
    root = pairs[0][0]
    want = fifo_bfs_levels(adj, n, root)
    for params in (BfsParams(), BfsParams(alpha=1e6, beta=1e-6, mode=DIRECTION_OPTIMIZING), DO):
        res = bfs(g, root, params, workers=2)
        assert np.array_equal(res.levels(), want)
        assert validate_bfs_tree(g, root, res)
