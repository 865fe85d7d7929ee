"""SNAP text, weighted text and binary edge-list formats, plus dataset bundles.

Binary layout (all integers little-endian)::

    b"GBE1" | u8 flags (bit0 weighted, bit1 directed) | u64 num_vertices | u64 num_edges
    | num_edges x (u64 src, u64 dst) | [num_edges x f64 weight]
"""

from __future__ import annotations

import io
import json
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .datagen import KroneckerSpec, assign_weights, generate_kronecker, select_roots
from .errors import FormatError, GraphBenchError, ParseError
from .graph import EdgeList, build_csr

MAGIC = b"GBE1"
FLAG_WEIGHTED = 0x1
FLAG_DIRECTED = 0x2
_HEADER = struct.Struct("<4sBQQ")

SNAP_SUFFIX = ".snap"
WEIGHTED_SUFFIX = ".wsnap"
BINARY_SUFFIX = ".gbe"
ROOTS_SUFFIX = ".roots"


def _text(stream):
    if isinstance(stream, (str, os.PathLike)):
        with open(stream, "r", encoding="utf-8", newline="") as f:
            return f.read()
    data = stream.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def parse_snap(stream, weighted: bool = False, directed: bool = True) -> EdgeList:
    """Parse a SNAP edge list.

    ``stream`` is a path or a text/binary file object. Lines starting with
    ``#`` are comments. Vertex ids are kept as-is; ``num_vertices`` is the
    largest id plus one.
    """
    src, dst, wts = [], [], []
    for lineno, line in enumerate(_text(stream).splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        tok = s.split()
        if len(tok) < 2:
            raise ParseError(f"expected 'src dst', got {s!r}", lineno)
        if len(tok) > 3:
            raise ParseError(f"too many columns in {s!r}", lineno)
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError(f"non-integer vertex id in {s!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {s!r}", lineno)
        if weighted:
            if len(tok) != 3:
                raise ParseError("missing weight column on weighted read", lineno)
            try:
                w = float(tok[2])
            except ValueError:
                raise ParseError(f"bad weight {tok[2]!r}", lineno) from None
            if not w >= 0:
                raise ParseError(f"weight must be non-negative, got {tok[2]!r}", lineno)
            wts.append(w)
        elif len(tok) == 3:
            raise ParseError("weight token on unweighted read", lineno)
        src.append(u)
        dst.append(v)
    n = max(max(src), max(dst)) + 1 if src else 0
    weights = np.asarray(wts, dtype=np.float64) if weighted else None
    return EdgeList(n, np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64), weights, directed)


def snap_declared_counts(stream) -> tuple[int, int] | None:
    """``(nodes, edges)`` from a SNAP ``# Nodes: N Edges: M`` header, if present."""
    for line in _text(stream).splitlines():
        if not line.startswith("#"):
            if line.strip():
                break
            continue
        tok = line[1:].replace(":", " ").split()
        if "Nodes" in tok and "Edges" in tok:
            try:
                return int(tok[tok.index("Nodes") + 1]), int(tok[tok.index("Edges") + 1])
            except (IndexError, ValueError):
                return None
    return None


def compact_ids(edges: EdgeList) -> tuple[EdgeList, np.ndarray]:
    """Relabel the ids that occur in ``edges`` to ``0..k-1``.

    Returns the relabelled list and ``mapping`` with ``mapping[new] = old``.
    """
    mapping, inv = np.unique(np.concatenate([edges.src, edges.dst]), return_inverse=True)
    m = edges.num_edges
    out = EdgeList(len(mapping), inv[:m], inv[m:], edges.weights, edges.directed)
    return out, mapping


def _snap_lines(edges: EdgeList, provenance):
    yield "# graphbench edge list" + (f": {provenance}" if provenance else "")
    kind = "directed" if edges.directed else "undirected"
    cols = "src dst weight" if edges.weighted else "src dst"
    yield f"# {kind}, {cols}"
    yield f"# Nodes: {edges.num_vertices} Edges: {edges.num_edges}"
    s, d = edges.src.tolist(), edges.dst.tolist()
    if edges.weighted:
        # repr() is the shortest string that round-trips the double exactly
        for u, v, w in zip(s, d, edges.weights.tolist()):
            yield f"{u} {v} {w!r}"
    else:
        for u, v in zip(s, d):
            yield f"{u} {v}"


def write_snap(edges: EdgeList, stream, provenance: str | None = None) -> None:
    text = "\n".join(_snap_lines(edges, provenance)) + "\n"
    if isinstance(stream, (str, os.PathLike)):
        with open(stream, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    elif isinstance(stream, io.TextIOBase):
        stream.write(text)
    else:
        stream.write(text.encode("utf-8"))


def write_binary(edges: EdgeList, stream) -> None:
    flags = (FLAG_WEIGHTED if edges.weighted else 0) | (FLAG_DIRECTED if edges.directed else 0)
    pairs = np.empty((edges.num_edges, 2), dtype="<u8")
    pairs[:, 0] = edges.src
    pairs[:, 1] = edges.dst
    chunks = [_HEADER.pack(MAGIC, flags, edges.num_vertices, edges.num_edges), pairs.tobytes()]
    if edges.weighted:
        chunks.append(edges.weights.astype("<f8").tobytes())
    data = b"".join(chunks)
    if isinstance(stream, (str, os.PathLike)):
        Path(stream).write_bytes(data)
    else:
        stream.write(data)


def read_binary(stream) -> EdgeList:
    if isinstance(stream, (str, os.PathLike)):
        data = Path(stream).read_bytes()
    else:
        data = stream.read()
    if len(data) < _HEADER.size:
        raise FormatError(f"truncated header ({len(data)} of {_HEADER.size} bytes)")
    magic, flags, n, m = _HEADER.unpack_from(data)
    if magic[:3] != MAGIC[:3]:
        raise FormatError(f"bad magic {magic!r}")
    if magic != MAGIC:
        raise FormatError(f"unsupported format version {magic[3:]!r}, expected {MAGIC[3:]!r}")
    if flags & ~(FLAG_WEIGHTED | FLAG_DIRECTED):
        raise FormatError(f"unknown flag bits 0x{flags:02x}")
    weighted = bool(flags & FLAG_WEIGHTED)
    expected = _HEADER.size + m * (24 if weighted else 16)
    if len(data) != expected:
        raise FormatError(
            f"declared {m} edges need {expected} bytes but stream has {len(data)}"
        )
    if n >= 1 << 63:
        raise FormatError(f"num_vertices {n} does not fit a signed 64-bit id")
    body = np.frombuffer(data, dtype="<u8", count=2 * m, offset=_HEADER.size).reshape(m, 2)
    if m and body.max() >= n:
        raise FormatError(f"vertex id {int(body.max())} outside [0, {n})")
    weights = None
    if weighted:
        weights = np.frombuffer(data, dtype="<f8", count=m, offset=_HEADER.size + 16 * m).copy()
    src = body[:, 0].astype(np.int64)
    dst = body[:, 1].astype(np.int64)
    try:
        return EdgeList(n, src, dst, weights, bool(flags & FLAG_DIRECTED))
    except GraphBenchError as exc:
        raise FormatError(str(exc)) from exc


def write_roots(roots, stream) -> None:
    text = "".join(f"{int(r)}\n" for r in roots)
    if isinstance(stream, (str, os.PathLike)):
        with open(stream, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        stream.write(text)


def read_roots(stream) -> np.ndarray:
    roots = []
    for lineno, line in enumerate(_text(stream).splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        try:
            roots.append(int(s))
        except ValueError:
            raise ParseError(f"bad root id {s!r}", lineno) from None
    return np.asarray(roots, dtype=np.int64)


@dataclass
class DatasetBundle:
    """A homogenized dataset on disk: all files describe the same graph."""

    base_name: str
    directory: Path
    files: dict[str, Path]
    provenance: dict = field(default_factory=dict)

    @property
    def binary_path(self) -> Path:
        return self.files["binary-edgelist"]

    @property
    def roots_path(self) -> Path:
        return self.files["roots-file"]

    def load_edges(self) -> EdgeList:
        return read_binary(self.binary_path)

    def load_roots(self) -> np.ndarray:
        return read_roots(self.roots_path)

    def manifest(self) -> str:
        lines = [f"bundle {self.base_name} in {self.directory}"]
        for kind, path in self.files.items():
            lines.append(f"  {kind:16s} {path.name}")
        for key, value in self.provenance.items():
            lines.append(f"  {key}: {value}")
        return "\n".join(lines)


def _bundle_files(out_dir: Path, base: str) -> dict[str, Path]:
    return {
        "snap-text": out_dir / f"{base}{SNAP_SUFFIX}",
        "weighted-text": out_dir / f"{base}{WEIGHTED_SUFFIX}",
        "binary-edgelist": out_dir / f"{base}{BINARY_SUFFIX}",
        "roots-file": out_dir / f"{base}{ROOTS_SUFFIX}",
    }


def homogenize(
    source,
    out_dir,
    base_name: str | None = None,
    seed: int = 1,
    num_roots: int = 32,
    directed: bool = True,
    weighted: bool = False,
) -> DatasetBundle:
    """Write every format variant of ``source`` plus a roots file into ``out_dir``.

    ``source`` is either a :class:`KroneckerSpec` or a path to a SNAP file.
    For SNAP sources ``directed`` and ``weighted`` describe how to read the
    file; unweighted inputs get seeded uniform weights in the weighted copies.
    Output is a pure function of the inputs, so re-running rewrites identical bytes.
    """
    out_dir = Path(out_dir)
    if isinstance(source, KroneckerSpec):
        edges = generate_kronecker(source)
        weight_seed = source.seed
        base = base_name or f"kron-s{source.scale}-ef{source.edge_factor}-seed{source.seed}"
        provenance = {
            "source": "kronecker",
            "scale": source.scale,
            "edge_factor": source.edge_factor,
            "initiator": list(source.probabilities),
            "seed": source.seed,
            "permute": source.permute,
        }
    else:
        path = Path(source)
        try:
            edges = parse_snap(path, weighted=weighted, directed=directed)
        except OSError as exc:
            raise GraphBenchError(f"cannot read source {path}: {exc}") from exc
        weight_seed = seed
        base = base_name or path.stem
        provenance = {"source": "snap", "file": path.name, "seed": seed}
        declared = snap_declared_counts(path)
        if declared is not None:
            provenance["declared_nodes"], provenance["declared_edges"] = declared

    plain = edges.without_weights()
    full = edges if edges.weighted else assign_weights(edges, weight_seed)
    g = build_csr(plain, dedupe=True, drop_self_loops=True)
    roots = select_roots(g, num_roots, seed)

    provenance.update(
        num_vertices=edges.num_vertices,
        tuples=edges.num_edges,
        distinct_vertices=int(np.unique(np.concatenate([edges.src, edges.dst])).size),
        arcs_after_dedupe=g.num_edges,
        directed=edges.directed,
        root_seed=seed,
        weight_seed=weight_seed,
    )
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        files = _bundle_files(out_dir, base)
        tag = json.dumps({k: provenance[k] for k in ("source", "seed")}, sort_keys=True)
        write_snap(plain, files["snap-text"], provenance=tag)
        write_snap(full, files["weighted-text"], provenance=tag)
        write_binary(full, files["binary-edgelist"])
        write_roots(roots.roots, files["roots-file"])
    except OSError as exc:
        raise GraphBenchError(f"cannot write bundle to {out_dir}: {exc}") from exc
    return DatasetBundle(base, out_dir, files, provenance)


def open_bundle(path) -> DatasetBundle:
    """Locate a bundle from its directory (must hold exactly one) or any of its files."""
    path = Path(path)
    if path.is_dir():
        found = sorted(path.glob(f"*{BINARY_SUFFIX}"))
        if len(found) != 1:
            raise GraphBenchError(f"expected one {BINARY_SUFFIX} file in {path}, found {len(found)}")
        directory, base = path, found[0].name[: -len(BINARY_SUFFIX)]
    else:
        directory = path.parent
        base = path.name
        for suffix in (SNAP_SUFFIX, WEIGHTED_SUFFIX, BINARY_SUFFIX, ROOTS_SUFFIX):
            if base.endswith(suffix):
                base = base[: -len(suffix)]
                break
    files = _bundle_files(directory, base)
    missing = [k for k in ("binary-edgelist", "roots-file") if not files[k].exists()]
    if missing:
        raise GraphBenchError(f"bundle {base} in {directory} lacks {', '.join(missing)}")
    return DatasetBundle(base, directory, files)
