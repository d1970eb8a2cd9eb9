"""Certificate export: canonical JSON, CSV samples, and an SVG sketch.

JSON is the certificate of record: keys sorted, two-space indent, trailing
newline, rationals as exact ``"p/q"`` strings — re-running the pipeline on
the same problem reproduces it byte for byte.  CSV gives exact vertex
samples of the bounds and the selection (plus optional uniform interior
samples per edge).  SVG is a human aid only: roots thin, bounds dashed, the
selection heavy, an obstruction marked at its cut vertex; coordinates are
quantized to six decimals for display.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .errors import InvalidParameterError
from .pipeline import PipelineResult

FORMATS = ("json", "csv", "svg")


def to_canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def render_json(result: PipelineResult) -> str:
    return to_canonical_json(result.to_json())


def render_csv(result: PipelineResult, samples: int = 0) -> str:
    """Exact samples of u, v and w: one row per vertex, then ``samples``
    uniform interior points per edge (in edge order)."""
    if result.w is None:
        raise InvalidParameterError(
            "csv export needs a solved instance; "
            f"this one is {result.status} (use the json certificate)"
        )
    if samples < 0:
        raise InvalidParameterError("samples must be nonnegative")
    dom, u, v, w = result.domain, result.u, result.v, result.w
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["cell", "x", "u", "v", "w"])
    for i in range(dom.n_vertices):
        writer.writerow(
            [f"v{i}", str(dom.coords[i]), str(u.values[i]), str(v.values[i]), str(w.values[i])]
        )
    for e in range(dom.n_edges):
        a, b = dom.edges[e]
        for s in range(1, samples + 1):
            t = Fraction(s, samples + 1)
            row = [f"e{e}", str(dom.coords[a] + (dom.coords[b] - dom.coords[a]) * t)]
            for f in (u, v, w):
                row.append(str(f.values[a] + (f.values[b] - f.values[a]) * t))
            writer.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# SVG sketch
# ---------------------------------------------------------------------------

_W, _H, _PAD = 720, 480, 56


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _x_positions(dom) -> list[Fraction]:
    # Interval complexes plot against their coordinates; general graphs
    # against the vertex index, which at least keeps every edge visible.
    if dom.kind == "interval":
        return [Fraction(c) for c in dom.coords]
    return [Fraction(i) for i in range(dom.n_vertices)]


def _polyline(points: list[tuple[float, float]], stroke: str, width: str, dash: str = "") -> str:
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return (
        f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
        f'stroke-width="{width}"{extra} />'
    )


def render_svg(result: PipelineResult) -> str:
    dom = result.domain
    xs = _x_positions(dom)
    shown = [("u", result.u), ("v", result.v)]
    for i, f in enumerate(result.poly.roots, start=1):
        shown.append((f"f_{i}", f))
    if result.w is not None:
        shown.append(("w", result.w))

    ys = [val for _, f in shown for val in f.values]
    y_lo, y_hi = min(ys), max(ys)
    x_lo, x_hi = min(xs), max(xs)
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1, y_hi + 1
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1, x_hi + 1

    def sx(x) -> float:
        return _PAD + float((x - x_lo) / (x_hi - x_lo)) * (_W - 2 * _PAD)

    def sy(y) -> float:
        return _H - _PAD - float((y - y_lo) / (y_hi - y_lo)) * (_H - 2 * _PAD)

    def edge_points(f) -> list[list[tuple[float, float]]]:
        return [
            [(sx(xs[a]), sy(f.values[a])), (sx(xs[b]), sy(f.values[b]))]
            for a, b in dom.edges
        ]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_W} {_H}" '
        f'width="{_W}" height="{_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white" />',
    ]
    styles = {"u": ("#1f77b4", "1.5", "6 3"), "v": ("#2ca02c", "1.5", "6 3")}
    for name, f in shown:
        stroke, width, dash = styles.get(name, ("#999999", "1", ""))
        if name == "w":
            stroke, width, dash = "#000000", "2.5", ""
        for seg in edge_points(f):
            parts.append(_polyline(seg, stroke, width, dash))
    # vertex ticks along the bottom edge of the frame
    for i in range(dom.n_vertices):
        cx = sx(xs[i])
        parts.append(
            f'<line x1="{_fmt(cx)}" y1="{_H - _PAD}" x2="{_fmt(cx)}" '
            f'y2="{_H - _PAD + 6}" stroke="#333333" stroke-width="1" />'
        )
    if result.obstruction is not None:
        cut = int(result.obstruction.cut_vertex[1:])
        cx = sx(xs[cut])
        parts.append(
            f'<line x1="{_fmt(cx)}" y1="{_PAD}" x2="{_fmt(cx)}" y2="{_H - _PAD}" '
            f'stroke="#d62728" stroke-width="1.5" stroke-dasharray="4 3" />'
        )
        parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_H / 2}" r="5" fill="#d62728" />'
        )
        parts.append(
            f'<text x="{_fmt(cx + 8)}" y="{_H / 2 - 8}" font-size="14" '
            f'fill="#d62728">no selection: cut {result.obstruction.cut_vertex}</text>'
        )
    legend = []
    for name, _ in shown:
        if name in ("u", "v", "w") or name == "f_1":
            legend.append(name if name != "f_1" else "roots")
    parts.append(
        f'<text x="{_PAD}" y="{_PAD - 16}" font-size="14" fill="#333333">'
        f"{result.status}: " + ", ".join(legend) + "</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render(result: PipelineResult, fmt: str, samples: int = 0) -> str:
    if fmt == "json":
        return render_json(result)
    if fmt == "csv":
        return render_csv(result, samples)
    if fmt == "svg":
        return render_svg(result)
    raise InvalidParameterError(f"unknown format {fmt!r} (have: {', '.join(FORMATS)})")


def export(result: PipelineResult, fmt: str, path) -> None:
    text = render(result, fmt)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
