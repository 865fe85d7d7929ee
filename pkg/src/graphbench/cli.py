"""Command line entry point: ``graphbench {gen,run,analyze,power-baseline}``.

Exit codes: 0 success, 1 usage or input error, 2 result validation failure,
3 energy probe unavailable.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .algorithms import BfsParams, PageRankParams, SsspParams
from .analysis import (
    BaselineMissingError,
    ScalingSeries,
    emit_report,
    energy_by_group,
    energy_table,
    scaling_by_group,
    summarize,
)
from .datagen import KroneckerSpec
from .energy import PACKAGE, BaselineReport, MockProbe, PowercapProbe, measure_sleep_baseline
from .errors import GraphBenchError, ProbeUnavailableError, ValidationError
from .harness import ALGORITHMS, Dataset, ExperimentConfig, default_thread_sweep, emit_csv, parse_csv, run_experiment
from .io import homogenize, open_bundle

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_ENVIRONMENT = 0, 1, 2, 3

log = logging.getLogger("graphbench")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(cast):
    def conv(text):
        try:
            v = cast(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    conv.__name__ = cast.__name__
    return conv


def _non_negative_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _threads(text):
    if str(text).strip() == "sweep":
        return default_thread_sweep()
    if isinstance(text, list):
        items = text
    else:
        items = [t for t in str(text).split(",") if t.strip()]
    try:
        out = [int(t) for t in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad thread list {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("thread counts must be positive")
    return out


def _algorithms(text):
    items = text if isinstance(text, list) else [a.strip() for a in str(text).split(",") if a.strip()]
    bad = [a for a in items if a not in ALGORITHMS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s) {bad}; choose from {', '.join(ALGORITHMS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = _Parser(prog="graphbench", description="Phase-separated benchmarking of parallel graph kernels.",
                formatter_class=fmt)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("gen", help="generate or import a dataset bundle", formatter_class=fmt)
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--scale", type=_positive(int), help="Kronecker scale S (2^S vertices)")
    src.add_argument("--snap", type=Path, help="SNAP edge-list file to import")
    g.add_argument("--edge-factor", type=_positive(int), default=16, help="edge tuples per vertex")
    g.add_argument("--seed", type=int, default=1, help="seed for generation, weights and roots")
    g.add_argument("--roots", type=_positive(int), default=32, help="number of roots to select")
    g.add_argument("--out", type=Path, default=Path("data"), help="output directory")
    g.add_argument("--name", default=None, help="bundle base name (derived from the source if omitted)")
    g.add_argument("--undirected", action="store_true", help="treat SNAP edges as undirected")
    g.add_argument("--weighted", action="store_true", help="SNAP file has a weight column")
    g.add_argument("--no-permute", action="store_true", help="keep raw Kronecker vertex labels")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run kernels and write a results CSV", formatter_class=fmt)
    r.add_argument("--config", type=Path, default=None, help="TOML file supplying defaults for these flags")
    r.add_argument("--dataset", type=Path, help="bundle directory or bundle file")
    r.add_argument("--alg", type=_algorithms, default=["bfs-do"], help="comma-separated algorithms")
    r.add_argument("--threads", type=_threads, default=[1], help="thread count, comma list, or 'sweep'")
    r.add_argument("--trials", "--roots", dest="trials", type=_positive(int), default=None,
                   help="roots (BFS/SSSP) or repetitions (PageRank); 32, or 4 for a thread sweep")
    r.add_argument("--alpha", type=_positive(float), default=15.0, help="direction-optimizing BFS alpha")
    r.add_argument("--beta", type=_positive(float), default=18.0, help="direction-optimizing BFS beta")
    r.add_argument("--delta", type=_positive(float), default=1.0, help="delta-stepping bucket width")
    r.add_argument("--epsilon", type=_positive(float), default=6e-8, help="PageRank L1 stopping tolerance")
    r.add_argument("--damping", type=_positive(float), default=0.85, help="PageRank damping factor")
    r.add_argument("--max-iters", type=_positive(int), default=1000, help="PageRank iteration cap")
    r.add_argument("--energy", dest="energy", action="store_true", default=True, help="measure energy")
    r.add_argument("--no-energy", dest="energy", action="store_false", help="skip energy measurement")
    r.add_argument("--mock", default=None, help="mock probe: 'flat<W>' or a counter script file")
    r.add_argument("--no-validate", dest="validate", action="store_false", default=True,
                   help="skip result validation")
    r.add_argument("--warmup", type=_non_negative_int, default=0, help="untimed warm-up runs per thread count")
    r.add_argument("--construct-per-trial", action="store_true", help="rebuild the CSR for every trial")
    r.add_argument("--keep-duplicates", action="store_true", help="do not collapse parallel arcs")
    r.add_argument("--keep-self-loops", action="store_true", help="do not drop self-loops")
    r.add_argument("--out", type=Path, default=Path("results.csv"), help="results CSV path")
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("analyze", help="summarize results CSVs into report files", formatter_class=fmt)
    a.add_argument("csv", type=Path, nargs="+", help="results CSV file(s)")
    a.add_argument("--out", type=Path, default=Path("report"), help="report directory")
    a.add_argument("--aggregate", choices=("median", "mean"), default="median", help="scaling aggregate")
    a.add_argument("--scaling", action="store_true",
                   help="require scaling analysis (implied when several thread counts are present)")
    a.add_argument("--baseline", type=Path, default=None, help="sleep baseline JSON from power-baseline")
    a.add_argument("--sleep-power", type=_positive(float), default=None, help="package sleep power in W")
    a.add_argument("--no-svg", dest="svg", action="store_false", default=True, help="skip SVG plots")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("power-baseline", help="measure idle power during sleep", formatter_class=fmt)
    b.add_argument("--duration", type=_positive(float), default=10.0, help="sleep duration in seconds")
    b.add_argument("--mock", default=None, help="mock probe: 'flat<W>' or a counter script file")
    b.add_argument("--powercap-root", type=Path, default=None,
                   help="powercap sysfs root (else $GRAPHBENCH_POWERCAP_ROOT or /sys/class/powercap)")
    b.add_argument("--out", type=Path, default=Path("baseline.json"), help="baseline JSON path")
    b.set_defaults(func=cmd_power_baseline)
    return p


def _load_config(parser, subparser_name, argv):
    """Re-parse with defaults taken from ``--config`` so explicit flags still win."""
    args = parser.parse_args(argv)
    cfg_path = getattr(args, "config", None)
    if cfg_path is None:
        return args
    try:
        with open(cfg_path, "rb") as f:
            data = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {cfg_path}: {exc}") from exc
    sub = parser._subparsers._group_actions[0].choices[subparser_name]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in data.items():
        dest = key.replace("-", "_")
        if key == "roots":
            dest = "trials"
        if dest not in known or dest in ("config", "func", "help"):
            raise UsageError(f"unknown config key {key!r}")
        action = known[dest]
        if action.type is not None and not isinstance(value, bool):
            try:
                value = action.type(value if isinstance(value, list) else str(value))
            except argparse.ArgumentTypeError as exc:
                raise UsageError(f"config key {key!r}: {exc}") from exc
        defaults[dest] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def cmd_gen(args) -> int:
    if args.scale is not None:
        source = KroneckerSpec(args.scale, args.edge_factor, seed=args.seed, permute=not args.no_permute)
    else:
        source = args.snap
    bundle = homogenize(source, args.out, base_name=args.name, seed=args.seed, num_roots=args.roots,
                        directed=not args.undirected, weighted=args.weighted)
    print(bundle.manifest())
    return EXIT_OK


def _probe(args):
    if args.mock:
        return MockProbe.from_spec(args.mock)
    return PowercapProbe(getattr(args, "powercap_root", None))


def cmd_run(args) -> int:
    if args.dataset is None:
        raise UsageError("--dataset is required (flag or config key)")
    ds = Dataset.from_bundle(open_bundle(args.dataset))
    probe = _probe(args) if args.energy else None
    records = []
    for alg in args.alg:
        cfg = ExperimentConfig(
            dataset=ds,
            algorithm=alg,
            threads=args.threads,
            trials=args.trials,
            bfs=BfsParams(args.alpha, args.beta),
            sssp=SsspParams(args.delta),
            pagerank=PageRankParams(args.epsilon, args.damping, args.max_iters),
            energy=args.energy,
            probe=probe,
            strict_energy=True,
            validate=args.validate,
            warmup=args.warmup,
            construct_per_trial=args.construct_per_trial,
            dedupe=not args.keep_duplicates,
            drop_self_loops=not args.keep_self_loops,
        )
        log.info("running %s on %s with threads %s", alg, ds.name, cfg.threads)
        records += run_experiment(cfg)
    emit_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    records = []
    for path in args.csv:
        records += parse_csv(path)
    if not records:
        raise UsageError("no records to analyze")
    stats = summarize(records, metrics=("construction_s", "run_s", "iterations", "pkg_joules", "pkg_watts"))
    scaling = {}
    if args.scaling or len({r.threads for r in records}) > 1:
        scaling = scaling_by_group(records, args.aggregate)
        for key, series in scaling.items():
            if 1 not in series.times:
                raise BaselineMissingError(f"sequential baseline absent for {'/'.join(key)}: no threads=1 rows")
    baseline = None
    if args.baseline is not None:
        baseline = BaselineReport.load(args.baseline)
    elif args.sleep_power is not None:
        baseline = BaselineReport({PACKAGE: args.sleep_power})
    energy = {}
    if baseline is not None:
        energy = energy_by_group(records, baseline)
    written = emit_report(stats, scaling, energy, args.out, records=records, svg=args.svg)
    if energy:
        print(energy_table(energy))
    for p in written:
        print(f"wrote {p}")
    return EXIT_OK


def cmd_power_baseline(args) -> int:
    report = measure_sleep_baseline(_probe(args), args.duration)
    report.save(args.out)
    for domain, watts in sorted(report.sleep_power.items()):
        print(f"{domain}: {watts:.4f} W over {report.duration:g} s")
    print(f"wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        sub = next((a for a in argv if not a.startswith("-")), None)
        try:
            args = _load_config(parser, sub, argv) if sub == "run" else parser.parse_args(argv)
        except SystemExit as exc:
            # argparse exits on --help and usage errors; report its status instead
            return exc.code if isinstance(exc.code, int) else EXIT_USAGE
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"graphbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"graphbench: validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ProbeUnavailableError as exc:
        print(f"graphbench: energy probe unavailable: {exc}\n"
              "  rerun with --no-energy, or --mock flat<W> / --mock <script> for a scripted probe",
              file=sys.stderr)
        return EXIT_ENVIRONMENT
    except GraphBenchError as exc:
        print(f"graphbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
