"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
without ``-s``).
"""

import io
import os
import time

import numpy as np
import pytest

from graphbench import EdgeList, KroneckerSpec, assign_weights, build_csr, generate_kronecker, select_roots
from graphbench.algorithms import (
    DIRECTION_OPTIMIZING,
    BfsParams,
    PageRankParams,
    SsspParams,
    bfs,
    pagerank,
    sssp,
    validate_bfs_tree,
)
from graphbench.analysis import ScalingSeries, efficiency, speedup
from graphbench.energy import PACKAGE, UJ, BaselineReport, EnergyReport, MockProbe, energy_metrics
from graphbench.io import compact_ids, parse_snap, read_binary, snap_declared_counts, write_binary, write_snap

from conftest import random_edge_list
from oracles import adjacency_map, dense_pagerank, fifo_bfs_levels, heap_dijkstra, modular_delta, weighted_adjacency

# 20 seeded Kronecker graphs: scales 6..10, four seeds each
INSTANCES = [(s, seed) for s in range(6, 11) for seed in (1, 2, 3, 4)]
DO = BfsParams(mode=DIRECTION_OPTIMIZING)


@pytest.fixture
def verdict(capsys):
    def report(number, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return report


def _instances():
    for scale, seed in INSTANCES:
        e = assign_weights(generate_kronecker(KroneckerSpec(scale, seed=seed)), seed)
        g = build_csr(e, drop_self_loops=True)
        yield e, g, select_roots(g, 32, seed)


def test_criterion_01_bfs_correctness(verdict):
    t0 = time.perf_counter()
    bad = checked = 0
    for e, g, roots in _instances():
        adj = adjacency_map(e.num_vertices, e.edges.tolist(), directed=False, drop_self_loops=True)
        for root in roots:
            want = fifo_bfs_levels(adj, e.num_vertices, root)
            for params in (BfsParams(), DO):
                res = bfs(g, root, params)
                checked += 1
                if not (validate_bfs_tree(g, root, res) and np.array_equal(res.levels(), want)):
                    bad += 1
    elapsed = time.perf_counter() - t0
    verdict(1, bad == 0 and elapsed < 60,
            f"{checked} BFS runs on 20 graphs x 32 roots, {bad} failures, {elapsed:.1f} s (limit 60 s)")


def test_criterion_02_mode_and_worker_equivalence(verdict):
    mismatches = runs = 0
    for _, g, roots in _instances():
        for root in roots:
            base = bfs(g, root).levels()
            for params in (BfsParams(), DO):
                for n in (1, 2, 4, 8):
                    runs += 1
                    mismatches += not np.array_equal(bfs(g, root, params, workers=n).levels(), base)
    verdict(2, mismatches == 0, f"{runs} level arrays across modes x workers {{1,2,4,8}}, {mismatches} mismatches")


def test_criterion_03_sssp_exactness(verdict):
    worst = 0.0
    bad = runs = 0
    for e, g, roots in _instances():
        keep = e.src != e.dst
        adj = weighted_adjacency(e.num_vertices, e.src[keep].tolist(), e.dst[keep].tolist(),
                                 e.weights[keep].tolist())
        for root in roots:
            want = heap_dijkstra(adj, root)
            fin = np.isfinite(want)
            for delta in (0.1, 1.0, 10.0):
                got = sssp(g, root, SsspParams(delta)).dist
                runs += 1
                if not np.array_equal(np.isfinite(got), fin):
                    bad += 1
                    continue
                denom = np.where(want[fin] > 0, want[fin], 1.0)
                err = float(np.max(np.abs(got[fin] - want[fin]) / denom))
                worst = max(worst, err)
                bad += err > 1e-12
    verdict(3, bad == 0, f"{runs} delta-stepping runs vs Dijkstra, worst relative error {worst:.2e} (limit 1e-12)")


def _directed(n, arcs):
    return build_csr(EdgeList.from_pairs(n, arcs, directed=True), with_in_csr=True)


def test_criterion_04_pagerank(verdict):
    problems = []
    for name, (n, arcs) in {"3-cycle": (3, [(0, 1), (1, 2), (2, 0)]), "mutual pair": (2, [(0, 1), (1, 0)])}.items():
        if pagerank(_directed(n, arcs)).p.tolist() != [1 / n] * n:
            problems.append(f"{name} not exactly uniform")
    star = [(1, 0), (2, 0), (3, 0)]
    r = pagerank(_directed(4, star))
    want, iters = dense_pagerank(4, star, 0.85, 6e-8)
    star_err = float(np.max(np.abs(r.p - want)))
    if star_err > 1e-10 or r.iterations != iters:
        problems.append(f"star: error {star_err:.1e}, iterations {r.iterations} vs {iters}")
    worst_mass = 0.0
    for scale, seed in INSTANCES:
        g = build_csr(generate_kronecker(KroneckerSpec(scale, seed=seed)), drop_self_loops=True)
        for res in (pagerank(g), pagerank(g, PageRankParams(max_iters=3))):
            worst_mass = max(worst_mass, max(abs(m - 1.0) for m in res.mass))
            if res.converged and not res.final_delta < 6e-8:
                problems.append(f"converged with delta {res.final_delta}")
    if worst_mass > 1e-6:
        problems.append(f"mass drift {worst_mass:.1e}")
    verdict(4, not problems,
            "; ".join(problems) or f"exact symmetric cases, star error {star_err:.1e} in {iters} iterations, "
                                   f"max |sum p - 1| {worst_mass:.1e}")


# (time s, energy J) and the published derived rows
REFERENCE_ROWS = {
    "GAP": ((0.01636, 1.184), (72.38, 0.4046, 2.926)),
    "Graph500": ((0.01884, 1.830), (97.17, 0.4660, 3.928)),
}


def test_criterion_05_energy_table_arithmetic(verdict):
    worst = 0.0
    base = BaselineReport({PACKAGE: 24.73})
    for (t, j), expect in REFERENCE_ROWS.values():
        m = energy_metrics(EnergyReport({PACKAGE: j}, t), base)[PACKAGE]
        got = (m.average_power, m.sleeping_energy, m.increase_over_sleep)
        worst = max(worst, max(abs(a - b) / b for a, b in zip(got, expect)))
    verdict(5, worst <= 5e-3, f"GAP and Graph500 columns, worst relative deviation {worst:.2e} (limit 5e-3)")


def test_criterion_06_scaling_math(verdict):
    problems = []
    ns = [1, 2, 4, 8, 16, 32]
    for series in (ScalingSeries({n: 5.0 / n**0.8 for n in ns}), ScalingSeries({n: 1.0 + n for n in ns})):
        sp, ef = speedup(series), efficiency(series)
        if any(sp[n] != ef[n] * n for n in ns):
            problems.append("speedup != n * efficiency")
    ideal = efficiency(ScalingSeries({n: 64.0 / n for n in ns}))
    if any(v != 1.0 for v in ideal.values()):
        problems.append("ideal series efficiency != 1")
    if not speedup(ScalingSeries({1: 1.0, 2: 1.2}))[2] < 1:
        problems.append("speedup(2) >= 1 with T2 > T1")
    verdict(6, not problems, "; ".join(problems) or "identity exact, ideal efficiency 1, slowdown detected")


def test_criterion_07_generator_contract(verdict):
    problems = []
    for s in range(1, 17):
        spec = KroneckerSpec(s, seed=s)
        a, b = io.BytesIO(), io.BytesIO()
        e = generate_kronecker(spec)
        write_binary(e, a)
        write_binary(generate_kronecker(spec), b)
        if e.num_edges != 16 * 2**s or e.num_vertices != 2**s:
            problems.append(f"S={s}: {e.num_edges} tuples, {e.num_vertices} vertices")
        if a.getvalue() != b.getvalue():
            problems.append(f"S={s}: regeneration differs")
    verdict(7, not problems, "; ".join(problems) or "S=1..16 counts exact and regeneration byte-identical")


def test_criterion_08_format_round_trips(verdict, fixtures_dir):
    rng = np.random.default_rng(8)
    bad = 0
    for _ in range(100):
        e = random_edge_list(rng)
        if e.num_edges:
            # contiguous ids so the text form carries the vertex count
            n = int(max(e.src.max(), e.dst.max())) + 1
            e = EdgeList(n, e.src, e.dst, e.weights, e.directed)
        b1, b2 = io.BytesIO(), io.BytesIO()
        write_binary(e, b1)
        back = read_binary(io.BytesIO(b1.getvalue()))
        write_binary(back, b2)
        bad += not (back == e and b1.getvalue() == b2.getvalue())
        if e.num_edges:
            t1, t2 = io.StringIO(), io.StringIO()
            write_snap(e, t1)
            back = parse_snap(io.StringIO(t1.getvalue()), weighted=e.weighted, directed=e.directed)
            write_snap(back, t2)
            bad += not (back == e and t1.getvalue() == t2.getvalue())
    path = fixtures_dir / "cit-Patents-head.txt"
    sample = parse_snap(path)
    rows = [ln.split() for ln in path.read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    ids = {int(x) for r in rows for x in r}
    counts_ok = (
        sample.num_edges == len(rows)
        and sample.num_vertices == max(ids) + 1
        and compact_ids(sample)[0].num_vertices == len(ids)
        and snap_declared_counts(path) == (3_774_768, 16_518_948)
    )
    verdict(8, bad == 0 and counts_ok,
            f"100 fuzzed lists, {bad} round-trip failures; cit-Patents sample counts "
            f"{'ok' if counts_ok else 'wrong'} ({sample.num_edges} edges, {len(ids)} distinct ids)")


class _Clock:
    t = 0.0

    def __call__(self):
        return self.t


def test_criterion_09_wrap_handling(verdict):
    rng = np.random.default_rng(9)
    bad = 0
    for _ in range(1000):
        max_range = int(rng.integers(2, 1 << 40))
        start, end = (int(x) for x in rng.integers(0, max_range, 2))
        clock = _Clock()
        probe = MockProbe([(0.0, PACKAGE, start), (1.0, PACKAGE, end)], max_range={PACKAGE: max_range}, clock=clock)
        probe.start()
        clock.t = 1.0
        joules = probe.stop().domains[PACKAGE]
        want = modular_delta(start, end, max_range) * UJ
        bad += not (joules >= 0 and abs(joules - want) <= 1e-12 * max(want, UJ))
    verdict(9, bad == 0, f"1000 randomized counter wraps through the mock probe, {bad} mismatches")


@pytest.mark.slow
def test_criterion_10_desk_scale_speedup(verdict, capsys):
    cpus = os.cpu_count() or 1
    if cpus < 4:
        with capsys.disabled():
            print(f"\n[acceptance] criterion 10: SKIP - informational, needs >= 4 CPUs, machine has {cpus}")
        pytest.skip(f"informational criterion needs 4 CPUs; {cpus} available")
    g = build_csr(generate_kronecker(KroneckerSpec(20, seed=1), workers=4), drop_self_loops=True)
    roots = select_roots(g, 8, 1)
    times = {1: [], 4: []}
    for root in roots:
        for n in times:
            t0 = time.perf_counter()
            bfs(g, root, DO, workers=n)
            times[n].append(time.perf_counter() - t0)
    s = float(np.median(times[1]) / np.median(times[4]))
    with capsys.disabled():
        print(f"\n[acceptance] criterion 10: {'PASS' if s > 1.5 else 'FAIL'} - "
              f"informational, median DO-BFS speedup at 4 threads on scale 20: {s:.2f} (target > 1.5)")
