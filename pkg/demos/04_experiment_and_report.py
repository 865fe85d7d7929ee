"""A small thread sweep with a scripted power probe, then the analysis report."""

import tempfile
from pathlib import Path

from graphbench import KroneckerSpec
from graphbench.analysis import emit_report, energy_by_group, energy_table, scaling_by_group, speedup, summarize
from graphbench.energy import PACKAGE, BaselineReport, MockProbe
from graphbench.harness import ExperimentConfig, emit_csv, parse_csv, run_experiment
from graphbench.io import homogenize

work = Path(tempfile.mkdtemp())
bundle = homogenize(KroneckerSpec(12, seed=1), work / "data")
print(bundle.manifest())

records = []
for alg in ("bfs-td", "bfs-do", "pagerank"):
    cfg = ExperimentConfig(bundle.directory, alg, threads=[1, 2, 4], trials=4,
                           energy=True, probe=MockProbe.flat(60.0))
    records += run_experiment(cfg)
emit_csv(records, work / "results.csv")
records = parse_csv(work / "results.csv")
print(len(records), "records")

scaling = scaling_by_group(records)
for key, series in scaling.items():
    print(key, {n: round(s, 2) for n, s in speedup(series).items()})

energy = energy_by_group(records, BaselineReport({PACKAGE: 24.73}))
print(energy_table(energy))

written = emit_report(summarize(records), scaling, energy, work / "report", records=records)
print("report files:", [p.name for p in written])
