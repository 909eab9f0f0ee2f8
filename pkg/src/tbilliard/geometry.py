"""Axis-aligned billiard tables and the prefractal T-shaped approximations.

Level ``n`` of the construction is the union of the base shape (a unit square
with a 2 x 1/2 bar on top) and its images under every word of length ``<= n``
in the two contractions ``right`` (x/2 + (1, 3/2)) and ``left``
(x/2 + (-1/2, 3/2)).  The boundary is kept as a counter-clockwise vertex
cycle; edges are split at removed-segment endpoints so each removed segment
is an edge of its own, while ``side_id`` still names the maximal side.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

from .exact import QuadScalar, simplify, to_fraction

__all__ = [
    "Point",
    "Edge",
    "Location",
    "Table",
    "PrefractalBoundary",
    "ElusiveAddress",
    "Similitude",
    "CONVEX",
    "REFLEX",
    "HORIZONTAL",
    "VERTICAL",
    "RIGHT_MAP",
    "LEFT_MAP",
    "BASE_SHAPE",
    "build_prefractal",
    "polygon_table",
    "square_table",
    "rectangle_table",
    "height",
    "elusive_set",
    "address_to_point",
    "point_to_address",
    "locate",
    "copy_count",
]

CONVEX = "convex_right_angle"
REFLEX = "reflex_angle"
HORIZONTAL = "horizontal"
VERTICAL = "vertical"

F = Fraction
HALF = F(1, 2)


class Point(NamedTuple):
    x: object
    y: object

    def simplified(self) -> "Point":
        return Point(simplify(self.x), simplify(self.y))


def _pt(x, y) -> Point:
    return Point(simplify(x), simplify(y))


@dataclass(frozen=True)
class Edge:
    p: Point
    q: Point
    orientation: str
    level_introduced: int
    side_id: int

    def __post_init__(self):
        if (self.p.x == self.q.x) == (self.p.y == self.q.y):
            raise ValueError(f"edge {self.p}-{self.q} is not axis-aligned")
        if (self.p.x, self.p.y) > (self.q.x, self.q.y):
            raise ValueError("edge endpoints must be in lexicographic order")

    @property
    def length(self) -> Fraction:
        return (self.q.x - self.p.x) + (self.q.y - self.p.y)

    @property
    def coord(self):
        """The fixed coordinate: y for horizontal edges, x for vertical ones."""
        return self.p.y if self.orientation == HORIZONTAL else self.p.x

    @property
    def span(self):
        if self.orientation == HORIZONTAL:
            return self.p.x, self.q.x
        return self.p.y, self.q.y

    def contains(self, pt: Point) -> bool:
        lo, hi = self.span
        if self.orientation == HORIZONTAL:
            return pt.y == self.p.y and lo <= pt.x <= hi
        return pt.x == self.p.x and lo <= pt.y <= hi

    def parameter(self, pt: Point):
        lo, hi = self.span
        t = (pt.x if self.orientation == HORIZONTAL else pt.y) - lo
        return simplify(t / (hi - lo))


@dataclass(frozen=True)
class Location:
    kind: str  # on_edge | at_vertex | interior | exterior
    edge: Edge | None = None
    parameter: object = None
    vertex: Point | None = None
    angle_class: str | None = None


def _make_edge(a: Point, b: Point, level: int, side: int) -> Edge:
    p, q = (a, b) if (a.x, a.y) <= (b.x, b.y) else (b, a)
    orient = HORIZONTAL if p.y == q.y else VERTICAL
    return Edge(p, q, orient, level, side)


class Table:
    """A simple closed polygon with axis-aligned sides.

    ``vertices`` is the counter-clockwise corner cycle.  ``removed`` lists
    segments (lying on sides) that a later refinement turns into interior;
    sides are split at their endpoints.
    """

    def __init__(
        self,
        vertices: Sequence[Point],
        removed: Sequence[tuple[Point, Point]] = (),
        side_levels: Sequence[int] | None = None,
        name: str = "table",
    ):
        verts = [_pt(*v) for v in vertices]
        verts = _drop_collinear(verts)
        if _signed_area2(verts) <= 0:
            verts.reverse()
            verts = [verts[-1]] + verts[:-1]
        self.name = name
        self.vertices: list[tuple[Point, str]] = []
        n = len(verts)
        for i, v in enumerate(verts):
            a, c = verts[i - 1], verts[(i + 1) % n]
            turn = (v.x - a.x) * (c.y - v.y) - (v.y - a.y) * (c.x - v.x)
            self.vertices.append((v, CONVEX if turn > 0 else REFLEX))
        self.vertex_class = {v: cls for v, cls in self.vertices}

        removed_edges = []
        cuts: dict[int, list] = {}
        self.sides: list[Edge] = []
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            lvl = side_levels[i] if side_levels is not None else 0
            self.sides.append(_make_edge(a, b, lvl, i))
        by_line: dict = {}
        for s in self.sides:
            by_line.setdefault((s.orientation, s.coord), []).append(s)
        for r in removed:
            r0, r1 = _pt(*r[0]), _pt(*r[1])
            key = (HORIZONTAL, r0.y) if r0.y == r1.y else (VERTICAL, r0.x)
            host = None
            for s in by_line.get(key, ()):
                if s.contains(r0) and s.contains(r1):
                    host = s
                    break
            if host is None:
                raise ValueError(f"removed segment {r0}-{r1} is not on the boundary")
            cuts.setdefault(host.side_id, []).extend([r0, r1])
            removed_edges.append(_make_edge(r0, r1, host.level_introduced, host.side_id))
        self.removed_segments: list[Edge] = sorted(removed_edges, key=lambda e: (e.p.x, e.p.y))

        edges = []
        for s in self.sides:
            pts = {s.p, s.q, *cuts.get(s.side_id, [])}
            key = (lambda p: p.x) if s.orientation == HORIZONTAL else (lambda p: p.y)
            ordered = sorted(pts, key=key)
            for a, b in zip(ordered, ordered[1:]):
                edges.append(_make_edge(a, b, s.level_introduced, s.side_id))
        self.edges: list[Edge] = edges
        self._build_index()

    # -- spatial index ----------------------------------------------------
    def _build_index(self):
        hl: dict = {}
        vl: dict = {}
        for e in self.edges:
            (hl if e.orientation == HORIZONTAL else vl).setdefault(e.coord, []).append(e)
        self.h_lines = {}
        for y, es in hl.items():
            es.sort(key=lambda e: e.p.x)
            self.h_lines[y] = ([e.p.x for e in es], es)
        self.v_lines = {}
        for x, es in vl.items():
            es.sort(key=lambda e: e.p.y)
            self.v_lines[x] = ([e.p.y for e in es], es)
        self.h_coords = sorted(self.h_lines)
        self.v_coords = sorted(self.v_lines)
        self.removed_set = set(self.removed_segments)
        by_y: dict = {}
        for r in self.removed_segments:
            by_y.setdefault(r.p.y, []).append(r)
        self.removed_by_y = {}
        for y, rs in by_y.items():
            rs.sort(key=lambda e: e.p.x)
            self.removed_by_y[y] = ([r.p.x for r in rs], rs)

    def edge_at_h(self, y, x) -> Edge | None:
        entry = self.h_lines.get(y)
        if entry is None:
            return None
        los, es = entry
        i = bisect.bisect_right(los, x) - 1
        if i >= 0 and x <= es[i].q.x:
            return es[i]
        return None

    def edge_at_v(self, x, y) -> Edge | None:
        entry = self.v_lines.get(x)
        if entry is None:
            return None
        los, es = entry
        i = bisect.bisect_right(los, y) - 1
        if i >= 0 and y <= es[i].q.y:
            return es[i]
        return None

    def edge_containing(self, pt: Point) -> Edge | None:
        pt = pt.simplified()
        e = None
        if isinstance(pt.y, (int, Fraction)):
            e = self.edge_at_h(pt.y, pt.x)
        if e is None and isinstance(pt.x, (int, Fraction)):
            e = self.edge_at_v(pt.x, pt.y)
        return e

    def side(self, side_id: int) -> Edge:
        return self.sides[side_id]

    # -- derived quantities ---------------------------------------------
    @cached_property
    def perimeter(self) -> Fraction:
        return sum((s.length for s in self.sides), Fraction(0))

    @cached_property
    def bbox(self):
        xs = [v.x for v, _ in self.vertices]
        ys = [v.y for v, _ in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    @cached_property
    def cell_size(self) -> Fraction:
        """Largest 1/2^k grid on which every vertex lies (dyadic tables only)."""
        den = 1
        for v, _ in self.vertices:
            for c in (v.x, v.y):
                den = max(den, to_fraction(c).denominator)
        if den & (den - 1):
            raise ValueError("table vertices are not dyadic")
        return Fraction(1, den)

    def on_removed(self, pt: Point) -> tuple[Edge, bool] | None:
        """Removed segment (closed) containing ``pt`` and whether pt is an endpoint."""
        pt = pt.simplified()
        entry = self.removed_by_y.get(pt.y) if isinstance(pt.y, (int, Fraction)) else None
        if entry is None:
            return None
        los, segs = entry
        i = bisect.bisect_right(los, pt.x) - 1
        if i >= 0 and pt.x <= segs[i].q.x:
            seg = segs[i]
            return seg, pt.x == seg.p.x or pt.x == seg.q.x
        if i + 1 < len(segs) and pt.x == segs[i + 1].p.x:
            return segs[i + 1], True
        return None

    def __repr__(self):
        return f"<Table {self.name}: {len(self.vertices)} vertices, {len(self.edges)} edges>"


def _signed_area2(verts):
    s = 0
    for i in range(len(verts)):
        a, b = verts[i - 1], verts[i]
        s += a.x * b.y - a.y * b.x
    return s


def _redundant(a, v, c) -> bool:
    return v == a or (a.x == v.x == c.x) or (a.y == v.y == c.y)


def _drop_collinear(verts):
    """Remove repeated and straight-angle corners from an axis-aligned cycle."""
    out: list = []
    for v in verts:
        if out and out[-1] == v:
            continue
        while len(out) >= 2 and _redundant(out[-2], out[-1], v):
            out.pop()
        out.append(v)
    # the seam between the end and the start of the cycle
    changed = True
    while changed and len(out) > 3:
        changed = False
        if _redundant(out[-2], out[-1], out[0]):
            out.pop()
            changed = True
        elif _redundant(out[-1], out[0], out[1]):
            out.pop(0)
            changed = True
    return out


# ---------------------------------------------------------------------------
# the contraction maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Similitude:
    """x -> scale * x + (tx, ty); compositions of the two contractions."""

    scale: Fraction = F(1)
    tx: Fraction = F(0)
    ty: Fraction = F(0)

    def __call__(self, p) -> Point:
        return Point(self.scale * p[0] + self.tx, self.scale * p[1] + self.ty)

    def then_inner(self, inner: "Similitude") -> "Similitude":
        """self o inner."""
        return Similitude(
            self.scale * inner.scale,
            self.scale * inner.tx + self.tx,
            self.scale * inner.ty + self.ty,
        )

    def map_x(self, x):
        return self.scale * x + self.tx


RIGHT_MAP = Similitude(HALF, F(1), F(3, 2))
LEFT_MAP = Similitude(HALF, F(-1, 2), F(3, 2))
IDENTITY = Similitude()

BASE_SHAPE = [
    Point(F(0), F(0)),
    Point(F(1), F(0)),
    Point(F(1), F(1)),
    Point(F(3, 2), F(1)),
    Point(F(3, 2), F(3, 2)),
    Point(F(-1, 2), F(3, 2)),
    Point(F(-1, 2), F(1)),
    Point(F(0), F(1)),
]


def height(n: int) -> Fraction:
    """Top of level n: sum_{i=0}^{n} 3 * 2^{-i-1}."""
    return sum((F(3, 2 ** (i + 1)) for i in range(n + 1)), F(0))


def copy_count(n: int) -> int:
    return 2 ** (n + 1) - 1


def words(length: int):
    """All words over {L, R} of the given length, as strings, left-to-right."""
    if length == 0:
        return [""]
    return [w + c for w in words(length - 1) for c in "LR"]


def word_map(word: str) -> Similitude:
    f = IDENTITY
    for c in word:
        f = f.then_inner(LEFT_MAP if c == "L" else RIGHT_MAP)
    return f


def _open_path(f: Similitude, depth: int, lvl: int, out: list, levels: list):
    """Boundary of a copy, minus its base, from f(1,0) counter-clockwise to f(0,0)."""

    def emit(p, level):
        out.append(f(p))
        levels.append(level)

    emit((1, 0), lvl)
    emit((1, 1), lvl)
    emit((F(3, 2), 1), lvl)
    if depth > 0:
        _open_path(f.then_inner(RIGHT_MAP), depth - 1, lvl + 1, out, levels)
        _open_path(f.then_inner(LEFT_MAP), depth - 1, lvl + 1, out, levels)
    else:
        emit((F(3, 2), F(3, 2)), lvl)
    emit((F(-1, 2), F(3, 2)), lvl)
    emit((F(-1, 2), 1), lvl)
    emit((0, 1), lvl)
    emit((0, 0), lvl)


class PrefractalBoundary(Table):
    """Boundary of level ``n`` of the T-shaped prefractal table."""

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("level must be nonnegative")
        pts: list[Point] = []
        lv: list[int] = []
        _open_path(IDENTITY, n, 0, pts, lv)
        # close with the base: start at (0,0)
        cycle = [pts[-1]] + pts[:-1]
        cyc_levels = [lv[-1]] + lv[:-1]
        merged, merged_lv = [], []
        for p, l in zip(cycle, cyc_levels):
            if merged and merged[-1] == p:
                continue
            merged.append(p)
            merged_lv.append(l)
        keep = _drop_collinear(merged)
        keep_set = set(keep)
        side_levels = []
        for p, l in zip(merged, merged_lv):
            if p in keep_set:
                side_levels.append(l)
        removed = []
        for w in words(n + 1):
            f = word_map(w)
            removed.append((f((0, 0)), f((1, 0))))
        self.n = n
        self.height = height(n)
        super().__init__(keep, removed, side_levels=side_levels, name=f"T_{n}")
        self.removed_words = {}
        for w in words(n + 1):
            f = word_map(w)
            p0, p1 = _pt(*f((0, 0))), _pt(*f((1, 0)))
            self.removed_words[_make_edge(p0, p1, 0, 0).p] = w

    @property
    def copy_count(self) -> int:
        return copy_count(self.n)

    def removed_word(self, seg: Edge) -> str:
        """Address word of the level-(n+1) copy whose base is ``seg``."""
        return self.removed_words[seg.p]


def build_prefractal(n: int) -> PrefractalBoundary:
    return PrefractalBoundary(n)


def polygon_table(vertices, name="polygon") -> Table:
    return Table([_pt(*v) for v in vertices], name=name)


def square_table(side=1) -> Table:
    s = Fraction(side)
    return Table([(0, 0), (s, 0), (s, s), (0, s)], name="square")


def rectangle_table(width=4, height_=1) -> Table:
    w, h = Fraction(width), Fraction(height_)
    return Table([(0, 0), (w, 0), (w, h), (0, h)], name="rectangle")


# ---------------------------------------------------------------------------
# elusive set and addresses
# ---------------------------------------------------------------------------


def elusive_set() -> tuple[Point, Point]:
    return Point(F(-1), F(3)), Point(F(2), F(3))


@dataclass(frozen=True)
class ElusiveAddress:
    """Eventually periodic word over {L, R}: ``preperiod`` then ``period`` forever.

    L selects the left contraction, R the right one.
    """

    preperiod: str = ""
    period: str = "R"

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        if set(self.preperiod + self.period) - {"L", "R"}:
            raise ValueError("addresses use only L and R")

    def canonical(self) -> "ElusiveAddress":
        per = self.period
        for k in range(1, len(per) + 1):
            if len(per) % k == 0 and per[:k] * (len(per) // k) == per:
                per = per[:k]
                break
        pre = self.preperiod
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1] + per[:-1]
        return ElusiveAddress(pre, per)

    def letters(self, k: int) -> str:
        s = self.preperiod
        while len(s) < k:
            s += self.period
        return s[:k]

    def __str__(self):
        return f"{self.preperiod}({self.period})"


def address_to_point(addr: ElusiveAddress) -> Point:
    """The point of [-1, 2] x {3} whose nested-copy itinerary is ``addr``."""
    g = word_map(addr.period)
    fixed = g.tx / (1 - g.scale)
    x = word_map(addr.preperiod).map_x(fixed)
    return Point(x, F(3))


def point_to_address(x) -> ElusiveAddress:
    """Inverse itinerary of a rational x in [-1, 2]; ties at 1/2 go to R."""
    x = to_fraction(x)
    if not (-1 <= x <= 2):
        raise ValueError(f"{x} is outside [-1, 2]")
    seen: dict[Fraction, int] = {}
    out = []
    while x not in seen:
        seen[x] = len(out)
        if x >= HALF:
            out.append("R")
            x = 2 * x - 2
        else:
            out.append("L")
            x = 2 * x + 1
    i = seen[x]
    return ElusiveAddress("".join(out[:i]), "".join(out[i:]))


# ---------------------------------------------------------------------------
# point location
# ---------------------------------------------------------------------------


def locate(table: Table, pt) -> Location:
    pt = _pt(*pt)
    cls = table.vertex_class.get(pt)
    if cls is not None:
        return Location("at_vertex", vertex=pt, angle_class=cls)
    e = table.edge_containing(pt)
    if e is not None:
        return Location("on_edge", edge=e, parameter=e.parameter(pt))
    # even-odd ray cast towards +x, half-open in y
    crossings = 0
    for x in table.v_coords:
        if x <= pt.x:
            continue
        _, es = table.v_lines[x]
        for e in es:
            if e.p.y <= pt.y < e.q.y:
                crossings += 1
    return Location("interior" if crossings % 2 else "exterior")
