"""Orbits in the direction with slope sqrt(2)/34, computed in Q(sqrt 2).

Three computations:

* :func:`descent` -- from ``(0, sigma_n)`` heading down (right on even
  levels, left on odd ones) until the first hit of the base ``[0,1] x {0}``;
* :func:`verify_descent_recurrence` -- the base hits satisfy
  ``x_n = x_0 + 2 s_0 (1 - 2^-n)`` with ``x_0 = 51 sqrt2/2 - 36`` and
  ``s_0 = 1649 sqrt2/4 - 583``, whose limit is
  ``y0 = x_0 + 2 s_0 = 850 sqrt2 - 1202``;
* :func:`singular_sequence` -- the compatible orbits from ``(y0, 0)`` heading
  up-left: each escapes, then meets a reflex corner; level 1 escapes at
  ``-x_0^{tau_0}/2`` heading up-right; and the part of each level-n path
  beyond the previous escape is a scaled (possibly mirrored) copy of the
  level-1 one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import build_nontrivial_path, build_sequence, classify, prefractal
from .exact import QuadScalar, format_scalar, simplify
from .flow import Direction, PhasePoint, trace_exact
from .geometry import Point, height

__all__ = [
    "SLOPE",
    "X0_ZETA0",
    "S0",
    "Y0",
    "DescentRecord",
    "UnexpectedSingularity",
    "descent",
    "passes_through",
    "predicted_base_hit",
    "verify_descent_recurrence",
    "SingularSequenceReport",
    "singular_sequence",
    "DEFAULT_CAP",
]

SLOPE = QuadScalar(0, Fraction(1, 34), 2)  # sqrt(2)/34
X0_ZETA0 = QuadScalar(-36, Fraction(51, 2), 2)
S0 = QuadScalar(-583, Fraction(1649, 4), 2)
Y0 = X0_ZETA0 + 2 * S0

DEFAULT_CAP = 200_000


class UnexpectedSingularity(RuntimeError):
    """A descent orbit met a reflex corner before reaching the base."""


@dataclass
class DescentRecord:
    n: int
    start: Point
    direction: Direction
    zeta: int
    base_hit: object
    orbit: object = field(repr=False, default=None)


def descent_direction(n: int) -> Direction:
    """Down-right on even levels, down-left on odd levels."""
    return Direction(1 if n % 2 == 0 else -1, -1, SLOPE)


def descent(n: int, cap: int = DEFAULT_CAP) -> DescentRecord:
    if n < 0:
        raise ValueError("level must be nonnegative")
    T = prefractal(n)
    start = Point(Fraction(0), height(n))
    d = descent_direction(n)
    base = T.side(0)
    o = trace_exact(T, PhasePoint(start, d), cap, stop=lambda k, st: base.contains(st.point))
    if o.termination == "stopped":
        return DescentRecord(n, start, d, o.n_collisions, o.collisions[-1].point.x, o)
    if o.is_singular:
        raise UnexpectedSingularity(f"level {n}: descent met corner {o.singular_vertex} before the base")
    raise RuntimeError(f"level {n}: base not reached within {cap} collisions")


def passes_through(orbit, pt: Point) -> bool:
    """Does some chord of ``orbit`` contain ``pt`` (exact cross product + bounding box)?"""
    pts = orbit.points
    for a, b in zip(pts, pts[1:]):
        cross = (b.x - a.x) * (pt.y - a.y) - (b.y - a.y) * (pt.x - a.x)
        if cross == 0 and min(a.x, b.x) <= pt.x <= max(a.x, b.x) and min(a.y, b.y) <= pt.y <= max(a.y, b.y):
            return True
    return False


def predicted_base_hit(n: int):
    """``x_0 + s_0 * sum_{i<n} 2^-i``."""
    return simplify(X0_ZETA0 + 2 * S0 * (1 - Fraction(1, 2**n)))


def verify_descent_recurrence(N: int, cap: int = DEFAULT_CAP):
    """Compare simulated base hits with the closed form for ``1 <= n <= N``.

    Returns ``(ok, rows)`` with ``rows = [(n, zeta, simulated, predicted)]``.
    """
    rows = []
    ok = True
    for n in range(0, N + 1):
        rec = descent(n, cap)
        pred = predicted_base_hit(n)
        rows.append((n, rec.zeta, rec.base_hit, pred))
        ok = ok and rec.base_hit == pred
    return ok, rows


@dataclass
class SingularSequenceReport:
    levels: list
    terminations: list
    taus: list
    singular_at: list
    singular_vertices: list
    escape_points: list
    escape_before_corner: bool
    level1_position_ok: bool | None
    level1_direction_ok: bool | None
    self_similar: list
    classification: str
    terminal_heights_ok: bool = True
    path: object = field(repr=False, default=None)
    sequence: object = field(repr=False, default=None)

    @property
    def ok(self) -> bool:
        return (
            all(t == "singular" for t in self.terminations)
            and self.escape_before_corner
            and self.level1_position_ok is not False
            and self.level1_direction_ok is not False
            and all(s for _, s in self.self_similar)
            and self.classification == "singular"
            and self.terminal_heights_ok
        )

    def as_dict(self) -> dict:
        return {
            "levels": self.levels,
            "terminations": self.terminations,
            "taus": [t if t != math.inf else "inf" for t in self.taus],
            "singular_at": self.singular_at,
            "singular_vertices": [[format_scalar(v.x), format_scalar(v.y)] for v in self.singular_vertices],
            "escape_points": [[format_scalar(p.x), format_scalar(p.y)] if p else None for p in self.escape_points],
            "escape_before_corner": self.escape_before_corner,
            "level1_position_ok": self.level1_position_ok,
            "level1_direction_ok": self.level1_direction_ok,
            "self_similar": [[n, s] for n, s in self.self_similar],
            "classification": self.classification,
            "terminal_heights_ok": self.terminal_heights_ok,
            "ok": self.ok,
        }


def _portion(rec_prev_tau, orbit, tau):
    return orbit.points[rec_prev_tau : tau + 1]


def self_similar_step(seq, n: int) -> bool:
    """Is the level-n path beyond the level-(n-1) escape a scaled copy of the level-1 one?

    The level-1 portion after ``e_0`` is mapped by
    ``p -> e_{n-1} + 2^-(n-1) (eps (p.x - e_0.x), p.y - e_0.y)`` for
    ``eps = +1`` or ``-1`` and compared point by point with the level-n
    portion after ``e_{n-1}``.
    """
    r0, r1 = seq.record(0), seq.record(1)
    rp, rn = seq.record(n - 1), seq.record(n)
    if math.inf in (r0.tau, r1.tau, rp.tau, rn.tau):
        return False
    e0 = r0.escape_point
    en1 = rp.escape_point
    a = _portion(r0.tau, r1.orbit, r1.tau)
    b = _portion(rp.tau, rn.orbit, rn.tau)
    if len(a) != len(b):
        return False
    k = Fraction(1, 2 ** (n - 1))
    for eps in (1, -1):
        mapped = [Point(simplify(en1.x + k * eps * (p.x - e0.x)), simplify(en1.y + k * (p.y - e0.y))) for p in a]
        if mapped == b:
            return True
    return False


def singular_sequence(N: int, cap: int = DEFAULT_CAP) -> SingularSequenceReport:
    """Compatible orbits from ``(y0, 0)`` heading up-left, levels ``0..N``."""
    d = Direction(-1, 1, SLOPE)
    seq = build_sequence(Y0, d, N, cap=cap, backend="exact")
    recs = seq.per_level
    terms = [r.orbit.termination for r in recs]
    taus = [r.tau for r in recs]
    sing_at = [r.orbit.n_collisions + 1 if r.orbit.is_singular else None for r in recs]
    before = all(t != math.inf and s is not None and t < s for t, s in zip(taus, sing_at))
    pos_ok = dir_ok = None
    if N >= 1 and taus[0] != math.inf and taus[1] != math.inf:
        pos_ok = recs[1].escape_point.x == simplify(-recs[0].escape_point.x / 2)
        dir_ok = recs[1].escape_incoming == Direction(1, 1, SLOPE)
    sims = [(n, self_similar_step(seq, n)) for n in range(2, N + 1)]
    cls = classify(seq).verdict
    # escapes happen on the top removed segments: height sigma_n, gap 3*2^-(n+1) to E
    heights_ok = all(
        r.escape_point is not None
        and r.escape_point.y == height(n)
        and 3 - r.escape_point.y == Fraction(3, 2 ** (n + 1))
        for n, r in zip(seq.levels, recs)
    )
    try:
        path = build_nontrivial_path(seq)
    except ValueError:
        path = None
    return SingularSequenceReport(
        list(seq.levels),
        terms,
        taus,
        sing_at,
        [r.orbit.singular_vertex for r in recs],
        [r.escape_point for r in recs],
        before,
        pos_ok,
        dir_ok,
        sims,
        cls,
        heights_ok,
        path,
        seq,
    )
