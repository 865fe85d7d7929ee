"""Minimal SVG box and line plots; no plotting library required."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

W, H = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 30, 90
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def _label(key):
    return "/".join(str(k) for k in key) if isinstance(key, tuple) else str(key)


def _frame(title, body, ylabel):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">\n'
        f'<rect width="{W}" height="{H}" fill="white"/>\n'
        f'<text x="{W / 2}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>\n'
        f'<text x="16" y="{H / 2}" font-size="12" transform="rotate(-90 16 {H / 2})" '
        f'text-anchor="middle">{escape(ylabel)}</text>\n'
        f'<line x1="{LEFT}" y1="{H - BOTTOM}" x2="{W - RIGHT}" y2="{H - BOTTOM}" stroke="black"/>\n'
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{H - BOTTOM}" stroke="black"/>\n'
        + "".join(body) + "</svg>\n"
    )


def _yscale(lo, hi, log):
    if log:
        lo, hi = math.log10(lo), math.log10(hi)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    span = hi - lo

    def y(v):
        v = math.log10(v) if log else v
        return H - BOTTOM - (v - lo) / span * (H - TOP - BOTTOM)

    return y, lo, hi


def _yticks(y, lo, hi, log):
    out = []
    for i in range(5):
        v = lo + (hi - lo) * i / 4
        val = 10 ** v if log else v
        py = y(val)
        out.append(f'<line x1="{LEFT - 4}" y1="{py:.1f}" x2="{LEFT}" y2="{py:.1f}" stroke="black"/>'
                   f'<text x="{LEFT - 6}" y="{py + 4:.1f}" font-size="10" text-anchor="end">{val:.3g}</text>\n')
    return out


def box_plot_svg(stats: dict, ylabel: str, title: str = "Run time per trial") -> str:
    """One min/q1/median/q3/max box per group; log y-axis when the range spans a decade."""
    keys = list(stats)
    lo = min(s.min for s in stats.values())
    hi = max(s.max for s in stats.values())
    log = lo > 0 and hi / lo > 10
    y, ylo, yhi = _yscale(lo, hi, log)
    slot = (W - LEFT - RIGHT) / max(len(keys), 1)
    body = _yticks(y, ylo, yhi, log)
    for i, k in enumerate(keys):
        s = stats[k]
        cx = LEFT + slot * (i + 0.5)
        half = min(slot * 0.3, 30)
        c = PALETTE[i % len(PALETTE)]
        body.append(
            f'<line x1="{cx:.1f}" y1="{y(s.min):.1f}" x2="{cx:.1f}" y2="{y(s.max):.1f}" stroke="{c}"/>'
            f'<rect x="{cx - half:.1f}" y="{y(s.q3):.1f}" width="{2 * half:.1f}" '
            f'height="{max(y(s.q1) - y(s.q3), 0.5):.1f}" fill="none" stroke="{c}"/>'
            f'<line x1="{cx - half:.1f}" y1="{y(s.median):.1f}" x2="{cx + half:.1f}" '
            f'y2="{y(s.median):.1f}" stroke="{c}" stroke-width="2"/>'
            f'<text x="{cx:.1f}" y="{H - BOTTOM + 14}" font-size="9" text-anchor="end" '
            f'transform="rotate(-30 {cx:.1f} {H - BOTTOM + 14})">{escape(_label(k))}</text>\n'
        )
    return _frame(title, body, ylabel)


def line_plot_svg(series: dict, ylabel: str, ideal: bool = False, title: str | None = None) -> str:
    """Lines of ``{group: {threads: value}}`` against thread count (log2 x-axis)."""
    xs = sorted({n for s in series.values() for n in s})
    vals = [v for s in series.values() for v in s.values()]
    lo, hi = min(vals + [0.0]), max(vals + ([max(xs)] if ideal else []))
    y, ylo, yhi = _yscale(lo, hi, False)
    xmax = math.log2(max(xs)) or 1.0

    def x(n):
        return LEFT + math.log2(n) / xmax * (W - LEFT - RIGHT)

    body = _yticks(y, ylo, yhi, False)
    for n in xs:
        body.append(f'<text x="{x(n):.1f}" y="{H - BOTTOM + 14}" font-size="10" text-anchor="middle">{n}</text>\n')
    body.append(f'<text x="{W / 2}" y="{H - BOTTOM + 32}" font-size="12" text-anchor="middle">threads</text>\n')
    if ideal:
        pts = " ".join(f"{x(n):.1f},{y(n):.1f}" for n in xs)
        body.append(f'<polyline points="{pts}" fill="none" stroke="gray" stroke-dasharray="4 3"/>\n')
    for i, (key, s) in enumerate(series.items()):
        c = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{x(n):.1f},{y(v):.1f}" for n, v in sorted(s.items()))
        body.append(f'<polyline points="{pts}" fill="none" stroke="{c}" stroke-width="2"/>'
                    f'<text x="{W - RIGHT - 4}" y="{TOP + 14 * (i + 1)}" font-size="10" fill="{c}" '
                    f'text-anchor="end">{escape(_label(key))}</text>\n')
    return _frame(title or ylabel, body, ylabel)
