"""Hausdorff distance between planar polylines, exact where possible.

For a segment ``s`` of A, ``t -> d(s(t), B)^2`` is the lower envelope of the
convex functions ``g_j(t) = d(s(t), b_j)^2``.  Its maximum over ``[0, 1]``
is attained at ``t in {0, 1}`` or where two pieces of the envelope cross.
Each ``g_j`` is piecewise quadratic in ``t`` (distance to an endpoint or to
the supporting line), so crossings are roots of quadratics.  Rational roots
are handled exactly; roots involving a non-square discriminant are located
with mpmath and, if such a root carries the maximum, only the decimal value
is reported.

Segments of B that cannot be active on ``s`` are pruned with a
floating-point bound (min over ``j`` of max ``g_j`` on ``s`` versus the
segment-to-segment distance), padded by a relative margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .exact import QuadScalar, simplify, to_mpf

__all__ = ["HausdorffResult", "hausdorff_distance_squared_max", "directed_hausdorff_squared"]

_DPS = 50


@dataclass(frozen=True)
class HausdorffResult:
    """Squared Hausdorff distance: exact value (or None) and a decimal string."""

    squared: object
    decimal: str
    exact: bool

    @property
    def distance(self) -> float:
        return math.sqrt(float(mpmath.mpf(self.decimal)))

    def __float__(self):
        return float(mpmath.mpf(self.decimal))


def _f(v) -> float:
    return float(v)


def _seg_seg_dist2_float(a0, a1, b0, b1) -> float:
    def pt_seg(p, q0, q1):
        vx, vy = q1[0] - q0[0], q1[1] - q0[1]
        L = vx * vx + vy * vy
        if L == 0:
            return (p[0] - q0[0]) ** 2 + (p[1] - q0[1]) ** 2
        u = ((p[0] - q0[0]) * vx + (p[1] - q0[1]) * vy) / L
        u = min(1.0, max(0.0, u))
        dx, dy = p[0] - q0[0] - u * vx, p[1] - q0[1] - u * vy
        return dx * dx + dy * dy

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    d1, d2 = cross(b0, b1, a0), cross(b0, b1, a1)
    d3, d4 = cross(a0, a1, b0), cross(a0, a1, b1)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 * d2 < 0 and d3 * d4 < 0:
        return 0.0
    return min(pt_seg(a0, b0, b1), pt_seg(a1, b0, b1), pt_seg(b0, a0, a1), pt_seg(b1, a0, a1))


class _Quad:
    """c2 t^2 + c1 t + c0 with exact coefficients."""

    __slots__ = ("c2", "c1", "c0")

    def __init__(self, c2, c1, c0):
        self.c2, self.c1, self.c0 = c2, c1, c0

    def __call__(self, t):
        return (self.c2 * t + self.c1) * t + self.c0

    def __sub__(self, o):
        return _Quad(self.c2 - o.c2, self.c1 - o.c1, self.c0 - o.c0)


def _pieces(s0, s1, b0, b1):
    """Pieces (t_lo, t_hi, quad) of g(t) = dist(s(t), [b0, b1])^2 over t in [0, 1]."""
    vx, vy = s1[0] - s0[0], s1[1] - s0[1]
    wx, wy = b1[0] - b0[0], b1[1] - b0[1]
    L = wx * wx + wy * wy

    def point_quad(p):
        ex, ey = s0[0] - p[0], s0[1] - p[1]
        return _Quad(vx * vx + vy * vy, 2 * (ex * vx + ey * vy), ex * ex + ey * ey)

    if L == 0:
        return [(Fraction(0), Fraction(1), point_quad(b0))]
    # foot parameter u(t) = u0 + u1 t
    u0 = ((s0[0] - b0[0]) * wx + (s0[1] - b0[1]) * wy) / L
    u1 = (vx * wx + vy * wy) / L
    # distance to the supporting line: cross(w, s(t) - b0)^2 / L
    k0 = wx * (s0[1] - b0[1]) - wy * (s0[0] - b0[0])
    k1 = wx * vy - wy * vx
    line = _Quad(k1 * k1 / L, 2 * k0 * k1 / L, k0 * k0 / L)
    pq0, pq1 = point_quad(b0), point_quad(b1)
    if u1 == 0:
        if u0 <= 0:
            return [(Fraction(0), Fraction(1), pq0)]
        if u0 >= 1:
            return [(Fraction(0), Fraction(1), pq1)]
        return [(Fraction(0), Fraction(1), line)]
    ta = simplify(-u0 / u1)  # u = 0
    tb = simplify((1 - u0) / u1)  # u = 1
    if u1 > 0:
        order = [(None, ta, pq0), (ta, tb, line), (tb, None, pq1)]
    else:
        order = [(None, tb, pq1), (tb, ta, line), (ta, None, pq0)]
    out = []
    for lo, hi, q in order:
        lo = Fraction(0) if lo is None or lo < 0 else lo
        hi = Fraction(1) if hi is None or hi > 1 else hi
        if lo < hi:
            out.append((lo, hi, q))
    return out


def _is_square_rational(x: Fraction):
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _roots(q: _Quad, lo, hi):
    """Roots of q in [lo, hi]: (exact list, mp list)."""
    exact, approx = [], []
    c2, c1, c0 = simplify(q.c2), simplify(q.c1), simplify(q.c0)
    if c2 == 0:
        if c1 != 0:
            r = simplify(-c0 / c1)
            if lo <= r <= hi:
                exact.append(r)
        return exact, approx
    disc = simplify(c1 * c1 - 4 * c2 * c0)
    if disc < 0:
        return exact, approx
    root = None
    if not isinstance(disc, QuadScalar):
        root = _is_square_rational(Fraction(disc))
    if root is not None:
        for r in ((-c1 + root) / (2 * c2), (-c1 - root) / (2 * c2)):
            r = simplify(r)
            if lo <= r <= hi:
                exact.append(r)
        return exact, approx
    with mpmath.workdps(_DPS):
        sd = mpmath.sqrt(to_mpf(disc, _DPS))
        a2, b1 = to_mpf(c2, _DPS), to_mpf(c1, _DPS)
        flo, fhi = to_mpf(lo, _DPS), to_mpf(hi, _DPS)
        for r in ((-b1 + sd) / (2 * a2), (-b1 - sd) / (2 * a2)):
            if flo <= r <= fhi:
                approx.append(r)
    return exact, approx


def _pt_f(p):
    return (_f(p[0]), _f(p[1]))


def _segments(path):
    pts = list(path)
    if len(pts) == 1:
        return [(pts[0], pts[0])]
    return [(a, b) for a, b in zip(pts, pts[1:])]


def _directed_segment(s0, s1, bsegs, bsegs_f):
    """max over t of min_j g_j(t) on one segment; returns (exact_or_None, mpf)."""
    f0, f1 = _pt_f(s0), _pt_f(s1)
    # prune
    ub = math.inf
    for (b0, b1) in bsegs_f:
        g0 = _seg_seg_dist2_float(f0, f0, b0, b1)
        g1 = _seg_seg_dist2_float(f1, f1, b0, b1)
        ub = min(ub, max(g0, g1))
    margin = 1e-9 * (1 + ub)
    active = [j for j, (b0, b1) in enumerate(bsegs_f) if _seg_seg_dist2_float(f0, f1, b0, b1) <= ub + margin]
    pieces = [_pieces(s0, s1, *bsegs[j]) for j in active]

    def env_exact(t):
        best = None
        for ps in pieces:
            for lo, hi, q in ps:
                if lo <= t <= hi:
                    v = q(t)
                    if best is None or v < best:
                        best = v
                    break
        return best

    def env_mp(t):
        best = None
        for ps in pieces:
            for lo, hi, q in ps:
                if to_mpf(lo, _DPS) <= t <= to_mpf(hi, _DPS):
                    v = (to_mpf(q.c2, _DPS) * t + to_mpf(q.c1, _DPS)) * t + to_mpf(q.c0, _DPS)
                    if best is None or v < best:
                        best = v
                    break
        return best

    cand_exact = {Fraction(0), Fraction(1)}
    cand_mp = []
    for ps in pieces:
        for lo, hi, _ in ps:
            cand_exact.add(lo)
            cand_exact.add(hi)
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            for lo_i, hi_i, qi in pieces[i]:
                for lo_j, hi_j, qj in pieces[j]:
                    lo, hi = max(lo_i, lo_j), min(hi_i, hi_j)
                    if lo > hi:
                        continue
                    ex, ap = _roots(qi - qj, lo, hi)
                    cand_exact.update(ex)
                    cand_mp.extend(ap)
    best_exact = None
    for t in cand_exact:
        v = env_exact(t)
        if best_exact is None or v > best_exact:
            best_exact = v
    with mpmath.workdps(_DPS):
        best_mp = to_mpf(best_exact, _DPS)
        exact_wins = True
        for t in cand_mp:
            v = env_mp(t)
            if v > best_mp * (1 + mpmath.mpf(10) ** (-40)) + mpmath.mpf(10) ** (-45):
                best_mp = v
                exact_wins = False
    return (simplify(best_exact) if exact_wins else None), best_mp


def directed_hausdorff_squared(pathA, pathB):
    """sup over a in A of inf over b in B of |a - b|^2."""
    bsegs = _segments(pathB)
    bsegs_f = [(_pt_f(a), _pt_f(b)) for a, b in bsegs]
    best_exact, best_mp, all_exact = None, None, True
    for s0, s1 in _segments(pathA):
        ex, mp = _directed_segment(s0, s1, bsegs, bsegs_f)
        if best_mp is None or mp > best_mp:
            best_mp = mp
            best_exact = ex
            all_exact = ex is not None
    return (best_exact if all_exact else None), best_mp


def hausdorff_distance_squared_max(pathA, pathB) -> HausdorffResult:
    """Squared Hausdorff distance max(h(A,B), h(B,A)) between two polylines."""
    if not pathA or not pathB:
        raise ValueError("paths must be nonempty")
    e1, m1 = directed_hausdorff_squared(pathA, pathB)
    e2, m2 = directed_hausdorff_squared(pathB, pathA)
    ex, mp = (e1, m1) if m1 >= m2 else (e2, m2)
    if ex is not None:
        mp = to_mpf(ex, _DPS)
    return HausdorffResult(ex, mpmath.nstr(mp, 30), ex is not None)
