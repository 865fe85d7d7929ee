"""Region-scoped energy measurement over RAPL-style counters.

Probes read monotonically increasing energy counters (microjoules) at
``start()`` and ``stop()``; a counter that went backwards is assumed to have
wrapped once and is corrected by the domain's advertised max range.

Backends:

* :class:`PowercapProbe` reads ``/sys/class/powercap/intel-rapl:*``
  (root overridable through ``GRAPHBENCH_POWERCAP_ROOT``).
* :class:`MockProbe` replays a scripted counter trace, for tests and dry runs.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GraphBenchError, InvalidStateError, MalformedInputError, ParseError, ProbeUnavailableError

PACKAGE = "package-cpu"
DRAM = "dram"
DOMAINS = (PACKAGE, DRAM)

POWERCAP_ENV = "GRAPHBENCH_POWERCAP_ROOT"
DEFAULT_POWERCAP_ROOT = "/sys/class/powercap"
UJ = 1e-6

# typical powercap max_energy_range_uj
DEFAULT_MAX_RANGE_UJ = 262143328850


def wrap_delta(start: int, end: int, max_range: int) -> int:
    """Counter increase from ``start`` to ``end`` allowing one wrap at ``max_range``."""
    delta = end - start
    if delta < 0:
        delta += max_range
    return delta


@dataclass(frozen=True)
class EnergyReport:
    domains: dict
    wall_time: float

    def __post_init__(self):
        if not self.wall_time > 0:
            raise MalformedInputError("wall_time must be positive")
        for name, joules in self.domains.items():
            if joules < 0:
                raise MalformedInputError(f"negative energy for {name}")

    @property
    def average_power(self) -> dict:
        return {k: j / self.wall_time for k, j in self.domains.items()}


@dataclass(frozen=True)
class BaselineReport:
    sleep_power: dict
    duration: float = 10.0

    def __post_init__(self):
        for name, watts in self.sleep_power.items():
            if not watts > 0:
                raise MalformedInputError(f"sleep power for {name} must be positive")

    def to_json(self) -> str:
        return json.dumps({"duration": self.duration, "sleep_power": self.sleep_power}, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> BaselineReport:
        data = json.loads(text)
        return cls({k: float(v) for k, v in data["sleep_power"].items()}, float(data["duration"]))

    def save(self, path):
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> BaselineReport:
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class EnergyMetrics:
    energy_per_root: float
    average_power: float
    sleeping_energy: float
    increase_over_sleep: float
    time: float


class Probe:
    """Two-point energy counter reader. One active region at a time."""

    def __init__(self, clock=time.monotonic, events=None):
        self._clock = clock
        self.events = events
        self._start = None

    def zones(self) -> list[tuple[str, int]]:
        """``(domain, max_range_uj)`` per counter, in read order."""
        raise NotImplementedError

    def read_counters(self) -> list[int]:
        raise NotImplementedError

    def _sample(self):
        return self._clock(), self.read_counters()

    @property
    def active(self) -> bool:
        return self._start is not None

    def start(self) -> None:
        if self._start is not None:
            raise InvalidStateError("probe region already active (regions cannot nest)")
        self._start = self._sample()
        if self.events is not None:
            self.events.mark("probe.start")

    def stop(self) -> EnergyReport:
        if self._start is None:
            raise InvalidStateError("probe.stop() without start()")
        t1, counters = self._sample()
        if self.events is not None:
            self.events.mark("probe.stop")
        t0, c0 = self._start
        self._start = None
        joules = {}
        for (domain, max_range), a, b in zip(self.zones(), c0, counters):
            joules[domain] = joules.get(domain, 0.0) + wrap_delta(a, b, max_range) * UJ
        return EnergyReport(joules, t1 - t0)

    def measure(self, fn, *args, **kwargs):
        """Run ``fn`` inside a region; returns ``(result, report)``."""
        self.start()
        try:
            result = fn(*args, **kwargs)
        except BaseException:
            self._start = None
            raise
        return result, self.stop()


def _domain_of(name: str):
    name = name.strip()
    if name.startswith("package"):
        return PACKAGE
    if name == "dram":
        return DRAM
    return None


class PowercapProbe(Probe):
    """Reads Linux powercap RAPL zones; package zones of all sockets are summed."""

    def __init__(self, root=None, clock=time.monotonic, events=None):
        super().__init__(clock, events)
        self.root = Path(root or os.environ.get(POWERCAP_ENV) or DEFAULT_POWERCAP_ROOT)
        self._zones = self._discover()

    def _discover(self):
        if not self.root.is_dir():
            raise ProbeUnavailableError(
                f"no powercap interface at {self.root}; use a mock probe or disable energy"
            )
        zones = []
        seen = set()
        for zdir in sorted(self.root.rglob("intel-rapl:*")):
            if not zdir.is_dir():
                continue
            try:
                real = zdir.resolve()
                if real in seen:
                    continue
                seen.add(real)
                domain = _domain_of((zdir / "name").read_text())
                if domain is None:
                    continue
                max_range = int((zdir / "max_energy_range_uj").read_text())
                counter = zdir / "energy_uj"
                int(counter.read_text())
            except (OSError, ValueError) as exc:
                raise ProbeUnavailableError(f"cannot read RAPL zone {zdir}: {exc}") from exc
            zones.append((domain, max_range, counter))
        if not any(d == PACKAGE for d, _, _ in zones):
            raise ProbeUnavailableError(f"no readable RAPL package zone under {self.root}")
        return zones

    def zones(self):
        return [(d, r) for d, r, _ in self._zones]

    def read_counters(self):
        try:
            return [int(path.read_text()) for _, _, path in self._zones]
        except (OSError, ValueError) as exc:
            raise ProbeUnavailableError(f"RAPL counter read failed: {exc}") from exc


class MsrProbe(Probe):
    """Placeholder for direct model-specific-register access; not implemented."""

    def __init__(self, *args, **kwargs):
        raise ProbeUnavailableError("MSR backend is not implemented; use PowercapProbe or MockProbe")


class MockProbe(Probe):
    """Replays a scripted counter trace.

    The script holds ``(t, domain, counter_uj)`` samples; counters between
    samples are linearly interpolated and extrapolated past the last sample
    with the final slope. Scripted counters may wrap: the trace is unwrapped
    using ``max_range`` before interpolation and the reported value is
    re-wrapped; fractional microjoules are kept. By default ``t`` is
    seconds since the probe was created.
    """

    def __init__(self, samples, max_range=None, clock=None, events=None):
        if clock is None:
            t0 = time.monotonic()
            clock = lambda: time.monotonic() - t0  # noqa: E731
        super().__init__(clock, events)
        max_range = dict(max_range or {})
        traces = {}
        for t, domain, counter in samples:
            if domain not in DOMAINS:
                raise MalformedInputError(f"unknown energy domain {domain!r}")
            traces.setdefault(domain, []).append((float(t), int(counter)))
        if not traces:
            raise MalformedInputError("mock probe script has no samples")
        self._domains = [d for d in DOMAINS if d in traces]
        self._range = {d: int(max_range.get(d, DEFAULT_MAX_RANGE_UJ)) for d in self._domains}
        self._trace = {}
        for d in self._domains:
            pts = sorted(traces[d])
            t = np.array([p[0] for p in pts])
            raw = [p[1] for p in pts]
            unwrapped = [raw[0]]
            for a, b in zip(raw[:-1], raw[1:]):
                unwrapped.append(unwrapped[-1] + wrap_delta(a, b, self._range[d]))
            self._trace[d] = (t, np.array(unwrapped, dtype=np.float64))

    @classmethod
    def flat(cls, watts: float, domain: str = PACKAGE, **kwargs) -> MockProbe:
        """Constant power draw of ``watts`` on ``domain``."""
        return cls([(0.0, domain, 0), (1.0, domain, round(watts / UJ))], **kwargs)

    @classmethod
    def from_script(cls, path, **kwargs) -> MockProbe:
        """Load a script file: ``t domain counter_uj`` per line, ``#`` comments,
        and optional ``max_range <domain> <uj>`` directives."""
        samples, max_range = [], {}
        text = Path(path).read_text(encoding="utf-8")
        for lineno, line in enumerate(text.splitlines(), start=1):
            tok = line.split("#", 1)[0].split()
            if not tok:
                continue
            try:
                if tok[0] == "max_range" and len(tok) == 3:
                    max_range[tok[1]] = int(tok[2])
                elif len(tok) == 3:
                    samples.append((float(tok[0]), tok[1], int(tok[2])))
                else:
                    raise ValueError(line)
            except ValueError:
                raise ParseError(f"bad mock probe line {line!r}", lineno) from None
        return cls(samples, max_range=max_range, **kwargs)

    @classmethod
    def from_spec(cls, spec: str, **kwargs) -> MockProbe:
        """``flat<W>`` (e.g. ``flat24.73``) or a script path."""
        if spec.startswith("flat") and not Path(spec).exists():
            try:
                watts = float(spec[4:])
            except ValueError:
                raise GraphBenchError(f"bad mock spec {spec!r}") from None
            return cls.flat(watts, **kwargs)
        return cls.from_script(spec, **kwargs)

    def zones(self):
        return [(d, self._range[d]) for d in self._domains]

    def counter_at(self, domain: str, t: float) -> float:
        # fractional microjoules are kept so short regions stay exact
        ts, cs = self._trace[domain]
        if ts.size == 1:
            value = cs[0]
        elif t <= ts[-1]:
            value = float(np.interp(t, ts, cs))
        else:
            slope = (cs[-1] - cs[-2]) / (ts[-1] - ts[-2])
            value = cs[-1] + slope * (t - ts[-1])
        return value % self._range[domain]

    def read_counters(self):
        return self._sample()[1]

    def _sample(self):
        # one clock reading for all counters keeps scripted power exact
        t = self._clock()
        return t, [self.counter_at(d, t) for d in self._domains]


def measure_sleep_baseline(probe: Probe, duration: float = 10.0, sleep=time.sleep) -> BaselineReport:
    """Idle power per domain over a ``sleep(duration)`` region.

    Power is the region's energy over its measured wall time, which is
    ``duration`` plus the sleep call's overshoot.
    """
    if not duration > 0:
        raise MalformedInputError("baseline duration must be positive")
    probe.start()
    sleep(duration)
    report = probe.stop()
    return BaselineReport(report.average_power, duration)


def energy_metrics(report: EnergyReport, baseline: BaselineReport) -> dict:
    """Per-domain energy, average power, sleeping energy and increase over sleep.

    Sleeping energy is the idle power times the region's wall time; the
    increase over sleep is the measured energy divided by it.
    """
    if not report.wall_time > 0:
        raise MalformedInputError("zero wall time")
    missing = set(report.domains) - set(baseline.sleep_power)
    if missing:
        raise MalformedInputError(f"baseline lacks domains {sorted(missing)}")
    out = {}
    for domain, joules in report.domains.items():
        sleeping = baseline.sleep_power[domain] * report.wall_time
        out[domain] = EnergyMetrics(
            energy_per_root=joules,
            average_power=joules / report.wall_time,
            sleeping_energy=sleeping,
            increase_over_sleep=joules / sleeping if sleeping > 0 else math.inf,
            time=report.wall_time,
        )
    return out
