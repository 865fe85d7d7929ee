"""Experiment orchestration: per-root trials, phase-separated timing, CSV output.

Only two things are ever timed: building the CSR from an in-memory edge list
(``construction_s``) and one kernel invocation (``run_s``). Loading,
root selection, validation and output all happen outside those regions; the
optional :class:`EventLog` records the order of phases so tests can check it.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import time
import warnings
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

import numpy as np

from .algorithms import (
    DIRECTION_OPTIMIZING,
    TOP_DOWN,
    BfsParams,
    PageRankParams,
    SsspParams,
    bfs,
    pagerank,
    sssp,
    validate_bfs_tree,
    validate_distances,
    validate_ranks,
)
from .energy import DRAM, PACKAGE, PowercapProbe
from .errors import (
    IneligibleRootError,
    MalformedInputError,
    ProbeUnavailableError,
    SchemaError,
    ValidationError,
)
from .graph import EdgeList, attach_in_csr, build_csr
from .io import DatasetBundle, open_bundle

log = logging.getLogger(__name__)

ALGORITHMS = ("bfs-td", "bfs-do", "sssp", "pagerank")
ROOTED = ("bfs-td", "bfs-do", "sssp")

SCHEMA_VERSION = "1"
CSV_COLUMNS = (
    "schema", "dataset", "algorithm", "threads", "trial", "root",
    "construction_s", "run_s", "iterations", "converged",
    "pkg_joules", "dram_joules", "pkg_watts", "dram_watts", "timestamp",
)


class EventLog:
    """Ordered record of harness phases, shared with probes."""

    def __init__(self):
        self.events: list[tuple[str, int]] = []

    def mark(self, name: str) -> None:
        self.events.append((name, time.perf_counter_ns()))

    @property
    def names(self) -> list[str]:
        return [e[0] for e in self.events]


class _NullLog:
    def mark(self, name):
        pass


@dataclass
class Dataset:
    """In-memory dataset: the edge list and its shared roots."""

    name: str
    edges: EdgeList
    roots: np.ndarray

    @classmethod
    def from_bundle(cls, bundle: DatasetBundle | str | os.PathLike) -> Dataset:
        if not isinstance(bundle, DatasetBundle):
            bundle = open_bundle(bundle)
        return cls(bundle.base_name, bundle.load_edges(), bundle.load_roots())


def default_thread_sweep(max_threads: int | None = None) -> list[int]:
    """1, 2, 4, ... up to the hardware thread count (which is always included)."""
    top = max_threads or os.cpu_count() or 1
    sweep, n = [], 1
    while n < top:
        sweep.append(n)
        n *= 2
    sweep.append(top)
    return sweep


@dataclass
class ExperimentConfig:
    dataset: object
    algorithm: str
    threads: list = field(default_factory=lambda: [1])
    # None: 32 for a single thread count, 4 for a sweep
    trials: int | None = None
    bfs: BfsParams = field(default_factory=BfsParams)
    sssp: SsspParams = field(default_factory=SsspParams)
    pagerank: PageRankParams = field(default_factory=PageRankParams)
    energy: bool = False
    probe: object = None
    strict_energy: bool = False
    validate: bool = True
    warmup: int = 0
    construct_per_trial: bool = False
    dedupe: bool = True
    drop_self_loops: bool = True
    seed: int = 1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise MalformedInputError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if isinstance(self.threads, int):
            self.threads = [self.threads]
        self.threads = [int(t) for t in self.threads]
        if not self.threads or min(self.threads) < 1:
            raise MalformedInputError("thread counts must be >= 1")
        if self.trials is None:
            self.trials = 32 if len(self.threads) == 1 else 4
        if self.trials < 1:
            raise MalformedInputError("trials must be >= 1")
        if self.warmup < 0:
            raise MalformedInputError("warmup must be >= 0")


@dataclass(frozen=True)
class TrialRecord:
    dataset: str
    algorithm: str
    threads: int
    trial: int
    root: int | None
    construction_s: float
    run_s: float
    iterations: int | None = None
    converged: bool = True
    pkg_joules: float | None = None
    dram_joules: float | None = None
    pkg_watts: float | None = None
    dram_watts: float | None = None
    timestamp: str = ""

    def non_timing(self) -> tuple:
        return (self.dataset, self.algorithm, self.threads, self.trial, self.root,
                self.iterations, self.converged)


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter_ns()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter_ns() - t0) * 1e-9


def _construct(cfg, edges):
    if cfg.algorithm == "sssp":
        if not edges.weighted:
            raise MalformedInputError("SSSP needs a weighted dataset")
        src = edges
    else:
        src = edges.without_weights()
    g = build_csr(src, dedupe=cfg.dedupe, drop_self_loops=cfg.drop_self_loops)
    # reverse arcs are part of the data structure these kernels run on
    if cfg.algorithm in ("bfs-do", "pagerank"):
        g = attach_in_csr(g)
    return g


def _kernel(cfg, g, root, n):
    if cfg.algorithm == "bfs-td":
        return bfs(g, root, replace(cfg.bfs, mode=TOP_DOWN), n)
    if cfg.algorithm == "bfs-do":
        return bfs(g, root, replace(cfg.bfs, mode=DIRECTION_OPTIMIZING), n)
    if cfg.algorithm == "sssp":
        return sssp(g, root, cfg.sssp, n)
    return pagerank(g, cfg.pagerank, n)


def _validate(cfg, g, root, result):
    if cfg.algorithm in ("bfs-td", "bfs-do"):
        return validate_bfs_tree(g, root, result)
    if cfg.algorithm == "sssp":
        return validate_distances(g, root, result)
    return validate_ranks(result)


def _resolve_probe(cfg, events):
    if not cfg.energy:
        return None
    if cfg.probe is not None:
        probe = cfg.probe
        if getattr(probe, "events", None) is None and not isinstance(events, _NullLog):
            probe.events = events
        return probe
    try:
        return PowercapProbe(events=None if isinstance(events, _NullLog) else events)
    except ProbeUnavailableError as exc:
        if cfg.strict_energy:
            raise
        warnings.warn(f"energy measurement disabled: {exc}", RuntimeWarning, stacklevel=3)
        return None


def run_experiment(cfg: ExperimentConfig, events: EventLog | None = None) -> list[TrialRecord]:
    """Run every (thread count, trial) pair of ``cfg``; records come back in execution order.

    Rooted kernels walk the dataset's shared root list; PageRank is run
    ``trials`` times on the whole graph. The CSR is built once per thread
    count unless ``construct_per_trial`` is set. Raises
    :class:`ValidationError` if any result fails validation.
    """
    ev = events if events is not None else _NullLog()
    ev.mark("load.begin")
    ds = cfg.dataset
    if not isinstance(ds, Dataset):
        ds = Dataset.from_bundle(ds)
    ev.mark("load.end")

    rooted = cfg.algorithm in ROOTED
    if rooted:
        if len(ds.roots) < cfg.trials:
            raise IneligibleRootError(f"dataset has {len(ds.roots)} roots, {cfg.trials} trials requested")
        roots = [int(r) for r in ds.roots[: cfg.trials]]
    else:
        roots = [None] * cfg.trials

    probe = _resolve_probe(cfg, ev)
    records = []
    for n in cfg.threads:
        g = None
        for trial, root in enumerate(roots):
            if g is None or cfg.construct_per_trial:
                ev.mark("construct.begin")
                g, t_build = _timed(_construct, cfg, ds.edges)
                ev.mark("construct.end")
            if rooted and (not 0 <= root < g.num_vertices or g.offsets[root + 1] == g.offsets[root]):
                raise IneligibleRootError(f"root {root} is not eligible in {ds.name}")
            if trial == 0:
                for _ in range(cfg.warmup):
                    _kernel(cfg, g, roots[0], n)

            energy = None
            if probe is not None:
                probe.start()
            ev.mark("kernel.begin")
            result, t_run = _timed(_kernel, cfg, g, root, n)
            ev.mark("kernel.end")
            if probe is not None:
                energy = probe.stop()

            if cfg.validate:
                ev.mark("validate.begin")
                verdict = _validate(cfg, g, root, result)
                ev.mark("validate.end")
                if not verdict:
                    raise ValidationError(
                        f"{cfg.algorithm} on {ds.name} (threads={n}, trial={trial}, root={root}): "
                        f"{verdict.reason}"
                    )

            iterations = converged = None
            if cfg.algorithm == "pagerank":
                iterations, converged = result.iterations, result.converged
                if not converged:
                    log.warning("PageRank trial %d did not converge in %d iterations", trial, iterations)
            rec = TrialRecord(
                dataset=ds.name,
                algorithm=cfg.algorithm,
                threads=n,
                trial=trial,
                root=root,
                construction_s=t_build,
                run_s=t_run,
                iterations=iterations,
                converged=True if converged is None else converged,
                timestamp=datetime.now(timezone.utc).isoformat(timespec="microseconds"),
            )
            if energy is not None:
                rec = replace(
                    rec,
                    pkg_joules=energy.domains.get(PACKAGE),
                    dram_joules=energy.domains.get(DRAM),
                    pkg_watts=energy.average_power.get(PACKAGE),
                    dram_watts=energy.average_power.get(DRAM),
                )
            records.append(rec)
    return records


# -- CSV ---------------------------------------------------------------------


def _fmt_float(x):
    return "" if x is None else f"{x:.9g}"


def _row(rec: TrialRecord) -> list[str]:
    return [
        SCHEMA_VERSION,
        rec.dataset,
        rec.algorithm,
        str(rec.threads),
        str(rec.trial),
        "" if rec.root is None else str(rec.root),
        _fmt_float(rec.construction_s),
        _fmt_float(rec.run_s),
        "" if rec.iterations is None else str(rec.iterations),
        "true" if rec.converged else "false",
        _fmt_float(rec.pkg_joules),
        _fmt_float(rec.dram_joules),
        _fmt_float(rec.pkg_watts),
        _fmt_float(rec.dram_watts),
        rec.timestamp,
    ]


def emit_csv(records, path) -> None:
    """Write records in schema v1 (UTF-8, LF, 9 significant digits for reals)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow(_row(rec))
    if hasattr(path, "write"):
        path.write(buf.getvalue())
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(buf.getvalue())


def _opt(cast, value, row, column):
    if value == "":
        return None
    try:
        return cast(value)
    except ValueError:
        raise SchemaError(f"bad value {value!r} in column {column}", row, column) from None


def _req(cast, value, row, column):
    out = _opt(cast, value, row, column)
    if out is None:
        raise SchemaError(f"missing value in column {column}", row, column)
    return out


def _bool(value):
    if value not in ("true", "false"):
        raise ValueError(value)
    return value == "true"


def parse_csv(path) -> list[TrialRecord]:
    """Read a schema-v1 CSV. Row numbers in errors count the header as row 1."""
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path, "r", encoding="utf-8", newline="") as f:
            text = f.read()
    rows = csv.reader(io.StringIO(text))
    header = next(rows, None)
    if header is None:
        raise SchemaError("empty file: no header", 1)
    for i, expected in enumerate(CSV_COLUMNS):
        got = header[i] if i < len(header) else None
        if got != expected:
            name = got if got is not None else expected
            raise SchemaError(
                f"unexpected column {name!r} at position {i + 1} (expected {expected!r})", 1, name
            )
    if len(header) != len(CSV_COLUMNS):
        raise SchemaError(f"unexpected extra column {header[len(CSV_COLUMNS)]!r}", 1, header[len(CSV_COLUMNS)])

    out = []
    for rownum, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise SchemaError(f"expected {len(CSV_COLUMNS)} fields, got {len(row)}", rownum)
        f = dict(zip(CSV_COLUMNS, row))
        if f["schema"] != SCHEMA_VERSION:
            raise SchemaError(f"schema version {f['schema']!r}, expected {SCHEMA_VERSION!r}", rownum, "schema")
        rec = TrialRecord(
            dataset=f["dataset"],
            algorithm=f["algorithm"],
            threads=_req(int, f["threads"], rownum, "threads"),
            trial=_req(int, f["trial"], rownum, "trial"),
            root=_opt(int, f["root"], rownum, "root"),
            construction_s=_req(float, f["construction_s"], rownum, "construction_s"),
            run_s=_req(float, f["run_s"], rownum, "run_s"),
            iterations=_opt(int, f["iterations"], rownum, "iterations"),
            converged=_req(_bool, f["converged"], rownum, "converged"),
            pkg_joules=_opt(float, f["pkg_joules"], rownum, "pkg_joules"),
            dram_joules=_opt(float, f["dram_joules"], rownum, "dram_joules"),
            pkg_watts=_opt(float, f["pkg_watts"], rownum, "pkg_watts"),
            dram_watts=_opt(float, f["dram_watts"], rownum, "dram_watts"),
            timestamp=f["timestamp"],
        )
        if rec.algorithm not in ALGORITHMS:
            raise SchemaError(f"unknown algorithm {rec.algorithm!r}", rownum, "algorithm")
        if rec.threads < 1:
            raise SchemaError("threads must be >= 1", rownum, "threads")
        if not (math.isfinite(rec.run_s) and rec.run_s >= 0):
            raise SchemaError("run_s must be a non-negative time", rownum, "run_s")
        out.append(rec)
    return out


def round_trip_equal(a: TrialRecord, b: TrialRecord) -> bool:
    """Equality up to the 9-significant-digit precision CSV files carry."""
    for name in TrialRecord.__dataclass_fields__:
        x, y = getattr(a, name), getattr(b, name)
        if isinstance(x, float) and isinstance(y, float):
            if float(f"{x:.9g}") != float(f"{y:.9g}"):
                return False
        elif x != y:
            return False
    return True
