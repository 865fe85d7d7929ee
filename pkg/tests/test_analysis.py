import csv
import random

import numpy as np
import pytest

from graphbench.analysis import (
    TABLE_ROWS,
    BaselineMissingError,
    ScalingSeries,
    SummaryStats,
    efficiency,
    emit_report,
    energy_by_group,
    energy_table,
    scaling_by_group,
    speedup,
    summarize,
)
from graphbench.energy import PACKAGE, BaselineReport, EnergyReport, energy_metrics
from graphbench.errors import MalformedInputError
from graphbench.harness import TrialRecord

from oracles import five_numbers


def test_speedup_and_efficiency_basics():
    s = ScalingSeries({1: 10.0, 4: 2.5})
    assert speedup(s) == {1: 1.0, 4: 4.0}
    assert efficiency(s) == {1: 1.0, 4: 1.0}


def test_slower_with_two_threads():
    assert speedup(ScalingSeries({1: 1.0, 2: 1.3}))[2] < 1


def test_closed_form_sublinear_series():
    t1 = 3.7
    ns = [1, 2, 3, 4, 6, 8, 12, 16, 32, 64]
    s = ScalingSeries({n: t1 / n**0.8 for n in ns})
    sp, ef = speedup(s), efficiency(s)
    for n in ns:
        assert sp[n] == pytest.approx(n**0.8, rel=1e-12)
        assert ef[n] == sp[n] / n
        assert abs(ef[n] * n - sp[n]) <= 1e-15 * sp[n]
        if n & (n - 1) == 0:
            assert ef[n] * n == sp[n]


def test_ideal_series_efficiency_is_one():
    s = ScalingSeries({n: 8.0 / n for n in (1, 2, 4, 8)})
    assert all(v == 1.0 for v in efficiency(s).values())


def test_missing_baseline():
    with pytest.raises(BaselineMissingError, match="sequential baseline absent"):
        speedup(ScalingSeries({2: 1.0, 4: 0.6}))
    with pytest.raises(MalformedInputError):
        ScalingSeries({1: 0.0})


def test_quartiles_and_constant_data():
    s = SummaryStats.of([5, 1, 4, 2, 3])
    assert (s.min, s.q1, s.median, s.q3, s.max) == (1, 2, 3, 4, 5)
    c = SummaryStats.of([0.25] * 9)
    assert c.stddev == 0 and c.relative_stddev == 0
    one = SummaryStats.of([7.0])
    assert one.min == one.q1 == one.median == one.q3 == one.max == 7.0
    with pytest.raises(MalformedInputError):
        SummaryStats.of([])


def test_lognormal_matches_statistics_oracle():
    x = np.random.default_rng(32).lognormal(-4, 0.4, 32)
    s = SummaryStats.of(x)
    got = (s.min, s.q1, s.median, s.q3, s.max, s.mean, s.stddev)
    for a, b in zip(got, five_numbers(x)):
        assert a == pytest.approx(b, rel=1e-12, abs=0)
    assert s.relative_stddev == pytest.approx(s.stddev / s.mean, rel=1e-15)


def _recs(seed=0, threads=(1, 2, 4), trials=4, algs=("bfs-do",)):
    rng = random.Random(seed)
    out = []
    for alg in algs:
        for n in threads:
            for t in range(trials):
                out.append(TrialRecord("kron10", alg, n, t, t, 0.01, rng.uniform(0.5, 1.5) / n,
                                       pkg_joules=rng.uniform(1, 2)))
    return out


def test_summarize_is_permutation_invariant():
    recs = _recs()
    a = summarize(recs)
    shuffled = recs[:]
    random.Random(1).shuffle(shuffled)
    assert summarize(shuffled) == a
    assert len(a) == 3 * 2
    assert ("kron10", "bfs-do", 2, "run_s") in a


def test_scaling_median_aggregate():
    recs = [TrialRecord("d", "sssp", n, i, 0, 0.1, t) for n, ts in {1: [4, 1, 9], 2: [3, 2, 100]}.items()
            for i, t in enumerate(ts)]
    s = scaling_by_group(recs)[("d", "sssp")]
    assert s.times == {1: 4.0, 2: 3.0}
    assert scaling_by_group(recs, "mean")[("d", "sssp")].times[2] == 35.0


def test_energy_by_group_feeds_metrics():
    recs = [TrialRecord("g", "bfs-do", 32, i, i, 0.1, 0.01636, pkg_joules=1.184) for i in range(32)]
    m = energy_by_group(recs, BaselineReport({PACKAGE: 24.73}))[("g", "bfs-do", 32)]
    assert m.increase_over_sleep == pytest.approx(2.926, rel=5e-3)


def test_report_energy_table_shape(tmp_path):
    base = BaselineReport({PACKAGE: 24.73})
    energy = {
        ("GAP",): energy_metrics(EnergyReport({PACKAGE: 1.184}, 0.01636), base)[PACKAGE],
        ("Graph500",): energy_metrics(EnergyReport({PACKAGE: 1.830}, 0.01884), base)[PACKAGE],
    }
    table = energy_table(energy)
    body = table.splitlines()[2:]
    assert [ln.split("|")[1].strip() for ln in body] == [r[0] for r in TABLE_ROWS]
    assert len(body) == 5
    assert "2.926" in body[-1] and "3.928" in body[-1]
    emit_report({}, {}, energy, tmp_path)
    assert "Increase over Sleep" in (tmp_path / "summary.md").read_text()


def test_report_files_and_counts(tmp_path):
    recs = _recs(algs=("bfs-do", "sssp"))
    written = emit_report(summarize(recs), scaling_by_group(recs), {}, tmp_path, records=recs)
    names = {p.name for p in written}
    assert {"points.csv", "stats.csv", "scaling.csv", "summary.md",
            "runtime_box.svg", "speedup.svg", "efficiency.svg"} <= names
    with open(tmp_path / "scaling.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    for alg in ("bfs-do", "sssp"):
        assert sum(r["algorithm"] == alg for r in rows) == 3
    assert all(float(r["speedup"]) > 0 for r in rows)
    with open(tmp_path / "points.csv", newline="") as f:
        pts = list(csv.DictReader(f))
    assert sum(p["metric"] == "run_s" for p in pts) == len(recs)
    svg = (tmp_path / "runtime_box.svg").read_text()
    assert svg.startswith("<svg") or svg.startswith("<?xml")


def test_single_record_degenerate_box(tmp_path):
    rec = [TrialRecord("d", "bfs-td", 1, 0, 0, 0.1, 0.5)]
    stats = summarize(rec)
    s = stats[("d", "bfs-td", 1, "run_s")]
    assert s.min == s.q1 == s.median == s.q3 == s.max == 0.5
    emit_report(stats, scaling_by_group(rec), {}, tmp_path, records=rec)
    assert (tmp_path / "runtime_box.svg").exists()
    assert not (tmp_path / "speedup.svg").exists()


def test_report_rejects_empty(tmp_path):
    with pytest.raises(MalformedInputError):
        emit_report({}, {}, {}, tmp_path)


def test_energy_by_group_uses_region_time_when_watts_recorded():
    # kernel time is shorter than the energy region; power must stay at the probe's 60 W
    recs = [TrialRecord("g", "bfs-do", 1, i, i, 0.1, 0.9e-3, pkg_joules=0.06, pkg_watts=60.0) for i in range(4)]
    m = energy_by_group(recs, BaselineReport({PACKAGE: 24.0}))[("g", "bfs-do", 1)]
    assert m.average_power == pytest.approx(60.0, rel=1e-12)
    assert m.time == pytest.approx(1e-3, rel=1e-12)
