"""Derived quantities and report artifacts from trial records.

Quartiles use linear interpolation between closest ranks (numpy's default
``linear`` method); ``stddev`` is the sample standard deviation (ddof=1,
zero for a single point). Box plots use min/max whiskers.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .energy import PACKAGE, BaselineReport, EnergyReport, energy_metrics
from .errors import GraphBenchError, MalformedInputError

METRICS = ("construction_s", "run_s", "iterations", "pkg_joules", "dram_joules", "pkg_watts", "dram_watts")
GROUP_KEYS = ("dataset", "algorithm", "threads")

TABLE_ROWS = (
    ("Time (s)", "time", "{:.4g}"),
    ("Average Power per Root (W)", "average_power", "{:.4g}"),
    ("Energy per Root (J)", "energy_per_root", "{:.4g}"),
    ("Sleeping Energy (J)", "sleeping_energy", "{:.4g}"),
    ("Increase over Sleep", "increase_over_sleep", "{:.4g}"),
)


class BaselineMissingError(GraphBenchError, ValueError):
    """Scaling series lacks the single-thread time."""


@dataclass(frozen=True)
class SummaryStats:
    n_points: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    stddev: float
    relative_stddev: float

    @classmethod
    def of(cls, values) -> SummaryStats:
        x = np.sort(np.asarray(values, dtype=np.float64))
        if x.size == 0:
            raise MalformedInputError("cannot summarize an empty group")
        q1, med, q3 = np.quantile(x, [0.25, 0.5, 0.75], method="linear")
        mean = float(x.mean())
        sd = float(x.std(ddof=1)) if x.size > 1 else 0.0
        rel = sd / abs(mean) if mean != 0 else 0.0
        return cls(int(x.size), float(x[0]), float(q1), float(med), float(q3), float(x[-1]), mean, sd, rel)


def summarize(records, keys=GROUP_KEYS, metrics=("construction_s", "run_s")) -> dict:
    """Statistics per ``(*keys, metric)`` group; records lacking a metric are skipped for it."""
    groups = defaultdict(list)
    for rec in records:
        head = tuple(getattr(rec, k) for k in keys)
        for m in metrics:
            v = getattr(rec, m)
            if v is not None:
                groups[head + (m,)].append(v)
    return {k: SummaryStats.of(v) for k, v in sorted(groups.items(), key=lambda kv: tuple(map(str, kv[0])))}


@dataclass(frozen=True)
class ScalingSeries:
    times: dict  # thread count -> aggregate time

    def __post_init__(self):
        if any(not t > 0 for t in self.times.values()):
            raise MalformedInputError("scaling times must be positive")

    @classmethod
    def from_records(cls, records, aggregate="median", metric="run_s") -> ScalingSeries:
        by_n = defaultdict(list)
        for rec in records:
            by_n[rec.threads].append(getattr(rec, metric))
        agg = {"median": np.median, "mean": np.mean}[aggregate]
        return cls({n: float(agg(v)) for n, v in sorted(by_n.items())})

    @property
    def threads(self) -> list:
        return sorted(self.times)


def _t1(series: ScalingSeries) -> float:
    if 1 not in series.times:
        raise BaselineMissingError("sequential baseline absent: no n=1 time in scaling series")
    return series.times[1]


def speedup(series: ScalingSeries) -> dict:
    t1 = _t1(series)
    return {n: t1 / series.times[n] for n in series.threads}


def efficiency(series: ScalingSeries) -> dict:
    return {n: s / n for n, s in speedup(series).items()}


def scaling_by_group(records, aggregate="median") -> dict:
    """``(dataset, algorithm) -> ScalingSeries``."""
    groups = defaultdict(list)
    for rec in records:
        groups[(rec.dataset, rec.algorithm)].append(rec)
    return {k: ScalingSeries.from_records(v, aggregate) for k, v in sorted(groups.items())}


def energy_by_group(records, baseline: BaselineReport, domain=PACKAGE) -> dict:
    """Average time and energy per group fed through :func:`energy_metrics`.

    The time of a record is its energy region's wall time (joules / watts)
    when watts were recorded, else the kernel time ``run_s``.
    """
    field = {PACKAGE: "pkg_joules", "dram": "dram_joules"}[domain]
    watts_field = {PACKAGE: "pkg_watts", "dram": "dram_watts"}[domain]

    def region_time(rec):
        j, w = getattr(rec, field), getattr(rec, watts_field)
        return j / w if w else rec.run_s

    groups = defaultdict(list)
    for rec in records:
        if getattr(rec, field) is not None:
            groups[(rec.dataset, rec.algorithm, rec.threads)].append(rec)
    out = {}
    for key, recs in sorted(groups.items(), key=lambda kv: tuple(map(str, kv[0]))):
        t = float(np.mean([region_time(r) for r in recs]))
        j = float(np.mean([getattr(r, field) for r in recs]))
        out[key] = energy_metrics(EnergyReport({domain: j}, t), baseline)[domain]
    return out


# -- report emission ---------------------------------------------------------


def _label(key) -> str:
    return "/".join(str(k) for k in key)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def energy_table(metrics: dict) -> str:
    """Markdown table with one column per group and the five energy rows."""
    keys = list(metrics)
    lines = ["| | " + " | ".join(_label(k) for k in keys) + " |",
             "|---|" + "---:|" * len(keys)]
    for label, attr, fmt in TABLE_ROWS:
        cells = [fmt.format(getattr(metrics[k], attr)) for k in keys]
        lines.append(f"| {label} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def stats_table(stats: dict) -> str:
    lines = ["| group | metric | n | min | q1 | median | q3 | max | mean | rel. stddev |",
             "|---|---|---:|---:|---:|---:|---:|---:|---:|---:|"]
    for key, s in stats.items():
        lines.append(
            f"| {_label(key[:-1])} | {key[-1]} | {s.n_points} | {s.min:.4g} | {s.q1:.4g} | "
            f"{s.median:.4g} | {s.q3:.4g} | {s.max:.4g} | {s.mean:.4g} | {s.relative_stddev:.3f} |"
        )
    return "\n".join(lines)


def emit_report(stats, scaling, energy, out_dir, records=(), svg=True) -> list[Path]:
    """Write plot-ready CSVs, a markdown summary and optional SVG plots.

    ``stats`` comes from :func:`summarize`, ``scaling`` maps a group key to
    a :class:`ScalingSeries`, ``energy`` maps a group key to
    :class:`~graphbench.energy.EnergyMetrics`. ``records`` supplies the
    individual box-plot points. Returns the paths written.
    """
    if not (stats or scaling or energy or records):
        raise MalformedInputError("nothing to report")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise GraphBenchError(f"cannot create report directory {out}: {exc}") from exc
    written = []

    def emit(name, header, rows):
        p = out / name
        _write_csv(p, header, rows)
        written.append(p)

    emit("points.csv", ["group", "dataset", "algorithm", "threads", "trial", "metric", "value"],
         [[_label((r.dataset, r.algorithm, r.threads)), r.dataset, r.algorithm, r.threads, r.trial, m,
           f"{getattr(r, m):.9g}"]
          for r in records for m in METRICS if getattr(r, m) is not None])
    emit("stats.csv", ["group", "dataset", "algorithm", "threads", "metric", "value"],
         [[_label(k[:-1]), *k[:-1], f"{k[-1]}.{stat}", f"{getattr(s, stat):.9g}"]
          for k, s in stats.items() for stat in SummaryStats.__dataclass_fields__])
    scale_rows = []
    for key, series in scaling.items():
        if 1 in series.times:
            sp, ef = speedup(series), efficiency(series)
        else:
            sp = ef = {n: None for n in series.threads}
        for n in series.threads:
            scale_rows.append([_label(key), *key, n, f"{series.times[n]:.9g}",
                               "" if sp[n] is None else f"{sp[n]:.9g}",
                               "" if ef[n] is None else f"{ef[n]:.9g}"])
    emit("scaling.csv", ["group", "dataset", "algorithm", "threads", "time_s", "speedup", "efficiency"], scale_rows)
    if energy:
        emit("energy.csv", ["group", "metric", "value"],
             [[_label(k), attr, f"{getattr(m, attr):.9g}"] for k, m in energy.items() for _, attr, _ in TABLE_ROWS])

    parts = ["# Benchmark summary", ""]
    if stats:
        parts += ["## Runtime distribution", "", stats_table(stats), ""]
    if scaling:
        parts += ["## Strong scaling", "", "| group | threads | time (s) | speedup | efficiency |",
                  "|---|---:|---:|---:|---:|"]
        parts += [f"| {r[0]} | {r[3]} | {r[4]} | {r[5]} | {r[6]} |" for r in scale_rows]
        parts.append("")
    if energy:
        parts += ["## Energy", "", energy_table(energy), ""]
    p = out / "summary.md"
    p.write_text("\n".join(parts), encoding="utf-8")
    written.append(p)

    if svg:
        from .plots import box_plot_svg, line_plot_svg

        run_stats = {k[:-1]: s for k, s in stats.items() if k[-1] == "run_s"}
        if run_stats:
            p = out / "runtime_box.svg"
            p.write_text(box_plot_svg(run_stats, "run time (s)"), encoding="utf-8")
            written.append(p)
        sp_series = {k: speedup(s) for k, s in scaling.items() if 1 in s.times and len(s.times) > 1}
        if sp_series:
            p = out / "speedup.svg"
            p.write_text(line_plot_svg(sp_series, "speedup T1/Tn", ideal=True), encoding="utf-8")
            written.append(p)
            p = out / "efficiency.svg"
            ef_series = {k: efficiency(s) for k, s in scaling.items() if 1 in s.times and len(s.times) > 1}
            p.write_text(line_plot_svg(ef_series, "efficiency T1/(n Tn)"), encoding="utf-8")
            written.append(p)
    return written
