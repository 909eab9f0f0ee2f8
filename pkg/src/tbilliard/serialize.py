"""JSON, CSV and SVG output.

Exact values are written as strings (``"p/q"`` or ``"p/q + r/s*sqrt(d)"``)
and parsed back bit-for-bit; SVG coordinates are 12-significant-digit
decimals used only for drawing, while captions carry the exact strings.
Every emitter is deterministic for fixed inputs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from xml.sax.saxutils import escape

import mpmath

from .exact import QuadScalar, format_scalar, parse_scalar
from .flow import Direction, Orbit, PhasePoint
from .geometry import Point, Table, polygon_table

__all__ = [
    "scalar_to_str",
    "point_to_json",
    "point_from_json",
    "direction_to_json",
    "direction_from_json",
    "boundary_to_json",
    "orbit_to_json",
    "orbit_from_json",
    "sequence_to_json",
    "path_to_json",
    "dumps",
    "escape_distance_rows",
    "rows_to_csv",
    "boundary_svg",
    "orbit_svg",
    "path_svg",
    "decimal12",
]

SVG_DIGITS = 12


def scalar_to_str(v) -> str:
    return format_scalar(v)


def _inf(v):
    return "inf" if isinstance(v, float) and math.isinf(v) else v


def point_to_json(p: Point) -> list[str]:
    return [format_scalar(p.x), format_scalar(p.y)]


def point_from_json(v) -> Point:
    return Point(parse_scalar(v[0]), parse_scalar(v[1]))


def direction_to_json(d: Direction) -> dict:
    return {"sx": d.sx, "sy": d.sy, "slope": None if d.slope is None else format_scalar(d.slope)}


def direction_from_json(v) -> Direction:
    return Direction(v["sx"], v["sy"], None if v["slope"] is None else parse_scalar(v["slope"]))


def boundary_to_json(table: Table) -> dict:
    out = {
        "name": table.name,
        "level": getattr(table, "n", None),
        "vertices": [point_to_json(v) for v, _ in table.vertices],
        "vertex_classes": [c for _, c in table.vertices],
        "removed_segments": [[point_to_json(e.p), point_to_json(e.q)] for e in table.removed_segments],
        "perimeter": format_scalar(table.perimeter),
    }
    if hasattr(table, "height"):
        out["height"] = format_scalar(table.height)
        out["removed_words"] = [table.removed_word(e) for e in table.removed_segments]
    return out


def orbit_to_json(orbit: Orbit) -> dict:
    return {
        "table": orbit.table.name,
        "level": orbit.level,
        "vertices": [point_to_json(v) for v, _ in orbit.table.vertices],
        "initial": {"point": point_to_json(orbit.initial.point), "direction": direction_to_json(orbit.initial.direction)},
        "slope": format_scalar(orbit.slope),
        "collisions": [
            {"point": point_to_json(c.point), "signs": [c.direction.sx, c.direction.sy]} for c in orbit.collisions
        ],
        "termination": orbit.termination,
        "period": orbit.period,
        "singular_vertex": None if orbit.singular_vertex is None else point_to_json(orbit.singular_vertex),
        "escape_indices": [int(i) for i in orbit.escape_indices],
        "return_indices": [int(i) for i in orbit.return_indices],
        "endpoint_escapes": [int(i) for i in orbit.endpoint_escapes],
        "cap": orbit.cap,
    }


def orbit_from_json(data: dict, table: Table | None = None) -> Orbit:
    """Rebuild an :class:`Orbit` from :func:`orbit_to_json` output.

    The table is rebuilt from the stored level (prefractals) or vertex
    cycle unless one is passed in.
    """
    if table is None:
        if data.get("level") is not None:
            from .analysis import prefractal

            table = prefractal(int(data["level"]))
        else:
            table = polygon_table([point_from_json(v) for v in data["vertices"]], name=data.get("table", "polygon"))
    slope = parse_scalar(data["slope"])
    init = PhasePoint(point_from_json(data["initial"]["point"]), direction_from_json(data["initial"]["direction"]))
    cols = [PhasePoint(point_from_json(c["point"]), Direction(c["signs"][0], c["signs"][1], slope)) for c in data["collisions"]]
    sv = data.get("singular_vertex")
    return Orbit(
        table,
        init,
        cols,
        data["termination"],
        period=data.get("period"),
        singular_vertex=None if sv is None else point_from_json(sv),
        escape_indices=list(data.get("escape_indices", [])),
        return_indices=list(data.get("return_indices", [])),
        endpoint_escapes=list(data.get("endpoint_escapes", [])),
        cap=data.get("cap"),
    )


def _jsonable(v):
    if isinstance(v, (QuadScalar,)) or type(v).__name__ == "Fraction":
        return format_scalar(v)
    if isinstance(v, Point):
        return point_to_json(v)
    if isinstance(v, Direction):
        return direction_to_json(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item") and callable(v.item):  # numpy scalars
        return v.item()
    return v


def sequence_to_json(seq, classification=None) -> dict:
    out = {
        "x0": format_scalar(seq.start.x),
        "y0": format_scalar(seq.start.y),
        "direction": direction_to_json(seq.direction),
        "levels": list(seq.levels),
        "compatible": seq.compatible,
        "per_level": [
            {
                "level": r.level,
                "termination": r.orbit.termination,
                "period": r.orbit.period,
                "tau": _inf(r.tau),
                "upsilon": _inf(r.upsilon),
                "escape_point": None if r.escape_point is None else point_to_json(r.escape_point),
                "singular_vertex": None if r.orbit.singular_vertex is None else point_to_json(r.orbit.singular_vertex),
            }
            for r in seq.per_level
        ],
    }
    if classification is not None:
        out["classification"] = {
            "verdict": classification.verdict,
            "level": classification.level,
            "evidence": _jsonable(classification.evidence),
        }
    return out


def path_to_json(path) -> dict:
    return {
        "direction": path.direction_label,
        "escape_words": list(path.escape_words),
        "escape_points": [point_to_json(p) for p in path.escape_points],
        "terminal_heights": [format_scalar(h) for h in path.terminal_heights],
        "limit_point": None if path.limit_point is None else point_to_json(path.limit_point),
        "limit_interval": [format_scalar(v) for v in path.limit_interval],
        "address": None if path.address is None else {"preperiod": path.address.preperiod, "period": path.address.period},
        "notes": list(path.notes),
    }


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2) + "\n"


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def escape_distance_rows(seq, x0, slope_sign: int):
    """Rows ``level, tau, escape_x, distance, expected, match`` for a sequence."""
    from .analysis import escape_distance, expected_escape_distance

    rows = []
    for r in seq.per_level:
        if r.tau == math.inf:
            rows.append([r.level, "inf", "", "", "", False])
            continue
        got = escape_distance(r)
        want = expected_escape_distance(x0, slope_sign, r.level)
        rows.append([r.level, r.tau, format_scalar(r.escape_point.x), format_scalar(got), format_scalar(want), got == want])
    return ["level", "tau", "escape_x", "distance", "expected", "match"], rows


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_scalar(v) if isinstance(v, QuadScalar) or type(v).__name__ == "Fraction" else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------


def decimal12(v) -> str:
    """Decimal approximation with 12 significant digits (rendering only)."""
    if isinstance(v, QuadScalar):
        x = v.to_mpf(30)
    else:
        x = mpmath.mpf(v.numerator) / v.denominator if hasattr(v, "numerator") else mpmath.mpf(v)
    s = mpmath.nstr(x, SVG_DIGITS, strip_zeros=True, min_fixed=-12, max_fixed=12)
    return "0" if s in ("0.0", "-0.0") else s.rstrip(".")


class _Svg:
    def __init__(self, bbox, title: str, width: int = 800, margin=0.1):
        xmin, ymin, xmax, ymax = (mpmath.mpf(decimal12(v)) for v in bbox)
        w, h = xmax - xmin, ymax - ymin
        pad = max(w, h) * margin
        self.xmin, self.ymax = xmin - pad, ymax + pad
        self.vw, self.vh = w + 2 * pad, h + 2 * pad
        self.width = width
        self.height = int(width * self.vh / self.vw)
        self.items: list[str] = []
        self.captions: list[str] = []
        self.title = title

    def _xy(self, p: Point) -> str:
        # flip y so the picture is upright; coordinates in the viewBox frame
        x = mpmath.mpf(decimal12(p.x)) - self.xmin
        y = self.ymax - mpmath.mpf(decimal12(p.y))
        return f"{mpmath.nstr(x, SVG_DIGITS, strip_zeros=True)},{mpmath.nstr(y, SVG_DIGITS, strip_zeros=True)}"

    def polygon(self, pts, style):
        self.items.append(f'<polygon points="{" ".join(self._xy(p) for p in pts)}" style="{style}"/>')

    def polyline(self, pts, style):
        self.items.append(f'<polyline points="{" ".join(self._xy(p) for p in pts)}" style="{style}"/>')

    def segment(self, a, b, style):
        self.polyline([a, b], style)

    def dot(self, p, r, style):
        x, y = self._xy(p).split(",")
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{r}" style="{style}"/>')

    def caption(self, text: str):
        self.captions.append(text)

    def render(self) -> str:
        sw = mpmath.nstr(self.vw / 400, 6)
        cap_h = 18 * len(self.captions)
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height + cap_h + 10}">',
            f"<title>{escape(self.title)}</title>",
            f'<svg x="0" y="0" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {mpmath.nstr(self.vw, SVG_DIGITS)} {mpmath.nstr(self.vh, SVG_DIGITS)}">',
            f'<g stroke-width="{sw}">',
            *self.items,
            "</g>",
            "</svg>",
        ]
        for i, c in enumerate(self.captions):
            out.append(f'<text x="8" y="{self.height + 16 + 18 * i}" font-family="monospace" font-size="12">{escape(c)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _draw_boundary(svg: _Svg, table: Table):
    svg.polygon([v for v, _ in table.vertices], "fill:#f4f4f4;stroke:#000")
    for e in table.removed_segments:
        svg.segment(e.p, e.q, "stroke:#d22;stroke-dasharray:0.02,0.02;fill:none")


def boundary_svg(table: Table) -> str:
    svg = _Svg(table.bbox, f"{table.name} boundary")
    _draw_boundary(svg, table)
    svg.caption(f"{table.name}: {len(table.vertices)} vertices, perimeter {format_scalar(table.perimeter)}")
    if hasattr(table, "height"):
        svg.caption(f"height {format_scalar(table.height)}")
    return svg.render()


def orbit_svg(orbit: Orbit, max_points: int = 20000) -> str:
    table = orbit.table
    svg = _Svg(table.bbox, f"orbit on {table.name}")
    _draw_boundary(svg, table)
    pts = orbit.path()
    if len(pts) > max_points:
        pts = pts[:max_points]
        svg.caption(f"polyline truncated to the first {max_points} points")
    svg.polyline(pts, "stroke:#15c;fill:none;stroke-opacity:0.8")
    svg.dot(orbit.initial.point, "0.015", "fill:#090")
    if orbit.singular_vertex is not None:
        svg.dot(orbit.singular_vertex, "0.02", "fill:#d00")
    d = orbit.initial.direction
    svg.caption(
        f"start ({format_scalar(orbit.initial.point.x)}, {format_scalar(orbit.initial.point.y)}), "
        f"signs ({d.sx:+d},{d.sy:+d}), slope {format_scalar(d.slope)}"
    )
    extra = f", period {orbit.period}" if orbit.period else ""
    if orbit.singular_vertex is not None:
        sv = orbit.singular_vertex
        extra += f", corner ({format_scalar(sv.x)}, {format_scalar(sv.y)})"
    svg.caption(f"{orbit.n_collisions} collisions, {orbit.termination}{extra}")
    return svg.render()


def path_svg(path) -> str:
    seq = path.sequence
    table = seq.per_level[-1].orbit.table
    xmin, ymin, xmax, _ = table.bbox
    svg = _Svg((xmin, ymin, xmax, 3), f"nontrivial path ({path.direction_label})")
    _draw_boundary(svg, table)
    a, b = Point(-1, 3), Point(2, 3)
    svg.segment(a, b, "stroke:#a0a;fill:none")
    palette = ["#15c", "#c51", "#1a5", "#a1a", "#555", "#c15", "#5a1", "#15a"]
    for i, seg in enumerate(path.segments):
        svg.polyline(seg, f"stroke:{palette[i % len(palette)]};fill:none;stroke-opacity:0.8")
    for p in path.escape_points:
        svg.dot(p, "0.015", "fill:#d00")
    if path.limit_point is not None:
        svg.dot(path.limit_point, "0.025", "fill:#a0a")
        svg.caption(f"limit ({format_scalar(path.limit_point.x)}, 3), address {path.address}")
    else:
        lo, hi = path.limit_interval
        svg.caption(f"limit in [{format_scalar(lo)}, {format_scalar(hi)}] x {{3}}")
    svg.caption("escape words: " + " ".join(path.escape_words))
    return svg.render()
