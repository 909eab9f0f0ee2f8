"""Constructions that span several prefractal levels.

* first escape / return times of a single orbit;
* compatible initial conditions and sequences of compatible orbits;
* detection of eventually constant sequences;
* relative origins and binary truncations, and the escape-distance identity
  ``|x_n^{tau_n} - O| = x0 - (x0)_{n+1}`` for slopes ``1/p``;
* nontrivial paths (orbits truncated at their first escape) and their limit
  on the elusive segment, with its L/R address;
* a finite-level classification of a sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact import is_rational, sign, simplify, to_fraction
from .flow import DEFAULT_CAP, Direction, Orbit, PhasePoint, trace_exact, trace_orbit
from .geometry import (
    ElusiveAddress,
    Edge,
    Point,
    PrefractalBoundary,
    Table,
    address_to_point,
    build_prefractal,
    height,
    word_map,
)
from .hausdorff import hausdorff_distance_squared_max

__all__ = [
    "LevelRecord",
    "CompatibleSequence",
    "NontrivialPath",
    "BinaryExpansion",
    "Classification",
    "UndeterminedError",
    "NotApplicableError",
    "prefractal",
    "first_escape",
    "returns",
    "first_return",
    "check_compatible",
    "segment_boundary_hits",
    "build_sequence",
    "detect_eventually_constant",
    "OverhangHit",
    "overhang_top_hit",
    "relative_origin",
    "binary_truncate",
    "binary_expansion",
    "escape_distance",
    "verify_escape_distance",
    "build_nontrivial_path",
    "classify",
    "footprint",
    "return_footprints",
]


class UndeterminedError(ValueError):
    """The question has no answer for this input at the computed levels."""


class NotApplicableError(ValueError):
    """A quantity was requested that the input does not define (e.g. tau = inf)."""


@lru_cache(maxsize=32)
def prefractal(n: int) -> PrefractalBoundary:
    """Cached level-n boundary (boundaries are immutable)."""
    return build_prefractal(n)


# ---------------------------------------------------------------------------
# escape and return times
# ---------------------------------------------------------------------------


def first_escape(orbit: Orbit, boundary: Table | None = None):
    """Least collision index on a removed segment, or ``math.inf``."""
    if boundary is not None and boundary is not orbit.table:
        if getattr(boundary, "n", None) != getattr(orbit.table, "n", None):
            raise ValueError("orbit was traced on a different level")
    return orbit.escape_indices[0] if orbit.escape_indices else math.inf


def returns(orbit: Orbit) -> list[int]:
    """Indices of collisions on the (closed, maximal) side of the initial point."""
    return list(orbit.return_indices)


def first_return(orbit: Orbit):
    return orbit.return_indices[0] if orbit.return_indices else math.inf


def footprint(orbit: Orbit, side: Edge) -> set[Point]:
    """Collision points lying on ``side``."""
    return {c.point for c in orbit.collisions[1:] if side.contains(c.point)}


def return_footprints(orbit: Orbit, jmax: int = 4) -> list[Point]:
    """``x^{upsilon^j}`` for ``j = 1..jmax`` (fewer if the orbit has fewer returns)."""
    cs = orbit.collisions
    return [cs[k].point for k in orbit.return_indices[:jmax]]


# ---------------------------------------------------------------------------
# compatibility
# ---------------------------------------------------------------------------


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def segment_boundary_hits(table: Table, P: Point, Q: Point) -> list[Point]:
    """Exact intersection points (or overlap endpoints) of segment PQ with the boundary."""
    hits = []
    dx, dy = Q.x - P.x, Q.y - P.y
    for e in table.edges:
        ex, ey = e.q.x - e.p.x, e.q.y - e.p.y
        den = _cross(dx, dy, ex, ey)
        wx, wy = e.p.x - P.x, e.p.y - P.y
        if sign(den) == 0:
            if sign(_cross(dx, dy, wx, wy)) != 0:
                continue
            # collinear: project e's endpoints onto PQ
            L = dx * dx + dy * dy
            if sign(L) == 0:
                if e.contains(P):
                    hits.append(P)
                continue
            for r in (e.p, e.q):
                t = ((r.x - P.x) * dx + (r.y - P.y) * dy) / L
                if 0 <= t <= 1:
                    hits.append(Point(simplify(r.x), simplify(r.y)))
            for r in (P, Q):
                if e.contains(Point(simplify(r.x), simplify(r.y))):
                    hits.append(Point(simplify(r.x), simplify(r.y)))
            continue
        t = _cross(wx, wy, ex, ey) / den
        u = _cross(wx, wy, dx, dy) / den
        if 0 <= t <= 1 and 0 <= u <= 1:
            hits.append(Point(simplify(P.x + t * dx), simplify(P.y + t * dy)))
    return list(dict.fromkeys(hits))


def check_compatible(icA, icB) -> bool:
    """Compatibility of ``(level m, PhasePoint)`` with ``(level n, PhasePoint)``, ``m < n``.

    Directions must agree, and the closed segment joining the basepoints
    must run along that direction and meet the level-n boundary only at the
    level-n basepoint.
    """
    (m, a), (n, b) = icA, icB
    if m > n:
        (m, a), (n, b) = (n, b), (m, a)
    if a.direction != b.direction:
        return False
    if a.point == b.point:
        return True
    d = a.direction
    dx, dy = b.point.x - a.point.x, b.point.y - a.point.y
    if d.is_vertical:
        if sign(dx) != 0:
            return False
    else:
        # (dx, dy) must be parallel to (sx, sy*slope)
        if sign(dx * d.sy * d.slope - dy * d.sx) != 0:
            return False
    hits = segment_boundary_hits(prefractal(n), a.point, b.point)
    return hits == [b.point] or set(hits) == {b.point}


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------


@dataclass
class LevelRecord:
    level: int
    orbit: Orbit
    tau: object  # int or math.inf
    upsilons: list[int]

    @property
    def upsilon(self):
        return self.upsilons[0] if self.upsilons else math.inf

    @property
    def escape_point(self) -> Point | None:
        if self.tau == math.inf:
            return None
        return self.orbit.collisions[self.tau].point

    @property
    def escape_incoming(self) -> Direction | None:
        if self.tau == math.inf:
            return None
        return self.orbit.incoming(self.tau)


@dataclass
class CompatibleSequence:
    x0: object
    direction: Direction
    start: Point
    levels: range
    per_level: list[LevelRecord]
    compatible: bool = True

    def record(self, n: int) -> LevelRecord:
        return self.per_level[n - self.levels.start]

    @property
    def slope(self):
        return self.direction.slope

    @property
    def all_periodic(self) -> bool:
        return all(r.orbit.is_periodic for r in self.per_level)

    @property
    def all_singular(self) -> bool:
        return all(r.orbit.is_singular for r in self.per_level)

    @property
    def taus(self) -> list:
        return [r.tau for r in self.per_level]

    @property
    def upsilons(self) -> list:
        return [r.upsilon for r in self.per_level]


def build_sequence(x0, direction: Direction, N: int, start_level: int = 0, y0=0, cap: int = DEFAULT_CAP, backend="auto") -> CompatibleSequence:
    """Trace the orbits from ``(x0, y0)`` with ``direction`` on levels ``start_level..N``."""
    if N < start_level:
        raise ValueError("N must be >= start level")
    if direction.is_vertical:
        raise ValueError("vertical directions are not supported")
    pt = Point(simplify(x0), simplify(y0))
    init = PhasePoint(pt, direction)
    recs = []
    for n in range(start_level, N + 1):
        o = trace_orbit(prefractal(n), init, cap=cap, backend=backend)
        recs.append(LevelRecord(n, o, first_escape(o), returns(o)))
    seq = CompatibleSequence(simplify(x0), direction, pt, range(start_level, N + 1), recs)
    seq.compatible = all(
        check_compatible((a.level, a.orbit.initial), (b.level, b.orbit.initial))
        for i, a in enumerate(recs)
        for b in recs[i + 1 :]
    )
    return seq


def detect_eventually_constant(seq: CompatibleSequence):
    """Least level from which the collision point sets agree; ``None`` if no such level.

    Raises UndeterminedError unless every member is periodic.
    """
    if not seq.all_periodic:
        raise UndeterminedError("eventual constancy needs every orbit periodic")
    sets = [frozenset(c.point for c in r.orbit.collisions) for r in seq.per_level]
    for i in range(len(sets)):
        if all(s == sets[i] for s in sets[i:]):
            if i == len(sets) - 1 and len(sets) > 1:
                return None
            return seq.levels.start + i
    return None  # pragma: no cover


@dataclass
class OverhangHit:
    """Orbit from an overhang midpoint, traced up to its first hit of the copy's top."""

    level: int
    word: str
    start: Point
    direction: Direction
    orbit: Orbit
    top_point: Point | None
    stays_in_rectangle: bool
    hits_removed_midpoint: bool

    @property
    def ok(self) -> bool:
        return self.top_point is not None and self.stays_in_rectangle and self.hits_removed_midpoint


def overhang_top_hit(level: int, word: str, n: int, right: bool = True, sx: int = 1,
                     cap: int = 10**5) -> OverhangHit:
    """Start at the midpoint of an overhang of the copy ``word`` of ``T_level`` with slope ``2^-n``.

    The overhang is the lower side of the copy's top bar (the right one at
    ``x = 5/4`` or the left one at ``x = -1/4`` in the copy's own frame).
    The orbit is followed until it reaches the top of the bar; the result
    records whether it stayed inside the bar and whether that top point is
    the midpoint of a segment removed at the next level.
    """
    if len(word) != level:
        raise ValueError("the copy word must have length equal to the level")
    if n < 0:
        raise ValueError("n must be nonnegative")
    T = prefractal(level)
    f = word_map(word)
    start = Point(*(simplify(v) for v in f((Fraction(5, 4) if right else Fraction(-1, 4), Fraction(1)))))
    (xa, ya), (xb, yb) = f((Fraction(-1, 2), Fraction(1))), f((Fraction(3, 2), Fraction(3, 2)))
    lo, hi = min(xa, xb), max(xa, xb)
    d = Direction(sx, 1, Fraction(1, 2**n))
    o = trace_exact(T, PhasePoint(start, d), cap, stop=lambda k, st: st.point.y == yb)
    inside = all(lo <= p.x <= hi and ya <= p.y <= yb for p in o.points)
    top = o.points[-1] if o.termination == "stopped" else None
    mid = False
    if top is not None:
        rem = T.on_removed(top)
        mid = rem is not None and not rem[1] and (rem[0].p.x + rem[0].q.x) / 2 == top.x
    return OverhangHit(level, word, start, d, o, top, inside, mid)


# ---------------------------------------------------------------------------
# relative origins and binary expansions
# ---------------------------------------------------------------------------


def relative_origin(direction: Direction, segment: Edge) -> Point:
    """Left endpoint of a horizontal segment for rightward travel, right endpoint otherwise."""
    if segment.p.y != segment.q.y:
        raise ValueError("relative origins are defined on horizontal segments")
    if direction.is_vertical:
        raise ValueError("vertical travel has no relative origin")
    return segment.p if direction.sx > 0 else segment.q


def _check_nondyadic(x: Fraction):
    d = x.denominator
    if d & (d - 1) == 0:
        raise ValueError(f"{x} is a dyadic rational")


def binary_truncate(x, k: int) -> Fraction:
    """The first ``k`` binary digits of ``x`` in (0, 1), as a dyadic rational."""
    x = to_fraction(x)
    if k < 1:
        raise ValueError("k must be >= 1")
    if not (0 < x < 1):
        raise ValueError("x must lie in (0, 1)")
    _check_nondyadic(x)
    return Fraction(math.floor(x * 2**k), 2**k)


@dataclass(frozen=True)
class BinaryExpansion:
    value: Fraction
    preperiod: str
    period: str

    def digits(self, k: int) -> str:
        s = self.preperiod
        while len(s) < k:
            s += self.period
        return s[:k]

    def __str__(self):
        return f"0.{self.preperiod}({self.period})"


def binary_expansion(x) -> BinaryExpansion:
    x = to_fraction(x)
    if not (0 < x < 1):
        raise ValueError("x must lie in (0, 1)")
    _check_nondyadic(x)
    seen: dict[Fraction, int] = {}
    digits = []
    v = x
    while v not in seen:
        seen[v] = len(digits)
        v = 2 * v
        if v >= 1:
            digits.append("1")
            v -= 1
        else:
            digits.append("0")
    i = seen[v]
    return BinaryExpansion(x, "".join(digits[:i]), "".join(digits[i:]))


def _escape_segment(rec: LevelRecord) -> Edge:
    hit = rec.orbit.table.on_removed(rec.escape_point)
    if hit is None:  # pragma: no cover - tau is defined by this lookup
        raise NotApplicableError("escape point is not on a removed segment")
    return hit[0]


def escape_distance(rec: LevelRecord):
    """``|x_n^{tau_n} - O|`` with O the relative origin for the pre-collision direction."""
    if rec.tau == math.inf:
        raise NotApplicableError(f"level {rec.level}: no escape")
    seg = _escape_segment(rec)
    O = relative_origin(rec.escape_incoming, seg)
    return abs(rec.escape_point.x - O.x)


def expected_escape_distance(x0, slope_sign: int, n: int) -> Fraction:
    if slope_sign > 0:
        return x0 - binary_truncate(x0, n + 1)
    y = 1 - x0
    return y - binary_truncate(y, n + 1)


def verify_escape_distance(seq: CompatibleSequence, n: int) -> bool:
    """Escape-distance identity at level ``n`` for slopes ``+-1/p``, ``p`` odd."""
    rec = seq.record(n)
    if rec.tau == math.inf:
        raise NotApplicableError(f"level {n}: tau is infinite")
    slope = to_fraction(seq.slope)
    if slope.numerator != 1 or slope.denominator % 2 == 0:
        raise ValueError("slope must be 1/p with p odd")
    return escape_distance(rec) == expected_escape_distance(to_fraction(seq.x0), seq.direction.sx, n)


# ---------------------------------------------------------------------------
# nontrivial paths
# ---------------------------------------------------------------------------


@dataclass
class NontrivialPath:
    sequence: CompatibleSequence
    segments: list[list[Point]]
    escape_points: list[Point]
    escape_words: list[str]
    limit_point: Point | None
    limit_interval: tuple
    address: ElusiveAddress | None
    direction_label: str
    notes: list[str] = field(default_factory=list)

    @property
    def terminal_heights(self) -> list:
        return [p.y for p in self.escape_points]

    def hausdorff_steps(self):
        """Squared Hausdorff distance between consecutive truncated orbits."""
        return [hausdorff_distance_squared_max(a, b) for a, b in zip(self.segments, self.segments[1:])]


def _local_state(rec: LevelRecord):
    """Escape state in the frame of the escape segment: (position in [0,1], sx)."""
    seg = _escape_segment(rec)
    t = (rec.escape_point.x - seg.p.x) / (seg.q.x - seg.p.x)
    return simplify(t), rec.escape_incoming.sx


def _mirror(word: str) -> str:
    return word.translate(str.maketrans("LR", "RL"))


def build_nontrivial_path(seq: CompatibleSequence) -> NontrivialPath:
    """Union of the orbits truncated at their first escape, and its limit on E.

    Level ``n`` escapes through the base of the level-``n+1`` copy with word
    ``w_n``; the words must extend one another, and the limit's address is
    the infinite word they converge to.  The local escape state
    (position on the segment, horizontal sign) determines the next letter,
    so a repeated state -- or a mirror-image one -- makes the address
    eventually periodic and the limit exact.  Otherwise the limit is
    bracketed by the image of E under ``w_N``.
    """
    bad = [r.level for r in seq.per_level if r.tau == math.inf]
    if bad:
        raise NotApplicableError(f"first escape time is infinite at levels {bad}")
    segments = [r.orbit.points[: r.tau + 1] for r in seq.per_level]
    escape_points = [r.escape_point for r in seq.per_level]
    words = [r.orbit.table.removed_word(_escape_segment(r)) for r in seq.per_level]
    notes = []
    label = "theta0" if seq.direction.sx > 0 else "pi-theta0"
    nested = all(w2.startswith(w1) for w1, w2 in zip(words, words[1:]))
    if not nested:
        notes.append("escape words are not nested; no limit computed")
    last = words[-1]
    g = word_map(last)
    lo, hi = g.map_x(Fraction(-1)), g.map_x(Fraction(2))
    interval = (simplify(lo), simplify(hi))
    limit, address = None, None
    if nested and seq.levels.start == 0 and all(is_rational(p.x) for p in escape_points):
        states = [_local_state(r) for r in seq.per_level]
        found = None
        for j in range(len(states)):
            for i in range(j):
                if states[i] == states[j]:
                    found = (i, j, False)
                    break
                if states[i] == (simplify(1 - states[j][0]), -states[j][1]):
                    found = (i, j, True)
                    break
            if found:
                break
        if found:
            i, j, mirrored = found
            full = last
            pre = full[: i + 1]
            per = full[i + 1 : j + 1]
            if mirrored:
                per = per + _mirror(per)
            address = ElusiveAddress(pre, per).canonical()
            limit = address_to_point(address)
            if not (lo <= limit.x <= hi):  # pragma: no cover - consistency guard
                notes.append("limit outside the bracketing interval; discarded")
                limit, address = None, None
        else:
            notes.append("no repeated escape state within the computed levels")
    elif not all(is_rational(p.x) for p in escape_points):
        notes.append("irrational escape points: address extraction skipped")
    return NontrivialPath(seq, segments, escape_points, words, limit, interval, address, label, notes)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@dataclass
class Classification:
    verdict: str  # periodic | recurrent | singular | undetermined
    level: int
    evidence: dict


def _clusters(values, threshold) -> int:
    xs = sorted(values)
    if not xs:
        return 0
    count = 1
    for a, b in zip(xs, xs[1:]):
        if b - a >= threshold:
            count += 1
    return count


def classify(seq: CompatibleSequence, jmax: int = 4) -> Classification:
    """Finite-level verdict with the evidence used to reach it."""
    N = seq.levels.stop - 1
    ev: dict = {"levels": list(seq.levels)}
    if seq.all_singular:
        ev["reason"] = "every member orbit terminates at a reflex vertex"
        return Classification("singular", N, ev)
    feet = [return_footprints(r.orbit, jmax) for r in seq.per_level]
    J = min((len(f) for f in feet), default=0)
    ev["returns_available"] = J
    cauchy = J > 0
    x0 = seq.start.x
    gaps = []
    for n_idx, r in enumerate(seq.per_level):
        n = r.level
        if J == 0:
            break
        g = abs(feet[n_idx][0].x - x0)
        gaps.append(g)
        if not (g < Fraction(2) ** (-n + 1)):
            cauchy = False
        if n_idx > 0:
            for j in range(J):
                if not (abs(feet[n_idx][j].x - feet[n_idx - 1][j].x) < Fraction(2) ** (-n + 2)):
                    cauchy = False
    ev["first_return_gaps"] = gaps
    tail = seq.per_level[len(seq.per_level) // 2 :]
    tail_first = [return_footprints(r.orbit, 1)[0].x for r in tail if r.orbit.return_indices]
    clusters = _clusters(tail_first, Fraction(1, 2**N))
    ev["tail_clusters"] = clusters
    if J > 0 and clusters >= 2 and not cauchy:
        ev["reason"] = "return footprints split into several clusters"
        return Classification("singular", N, ev)
    if cauchy and seq.all_periodic:
        ev["reason"] = "every orbit periodic; return footprints Cauchy within 2^(-n+1)"
        return Classification("periodic", N, ev)
    if cauchy:
        ev["reason"] = "return footprints Cauchy but not every orbit closed"
        return Classification("recurrent", N, ev)
    ev["reason"] = "no certificate at the computed levels"
    return Classification("undetermined", N, ev)
