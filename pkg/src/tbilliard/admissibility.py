"""Which rational basepoints and slopes keep an orbit away from every corner.

All prefractal vertices are dyadic points ``(a/2^c, b/2^d)``, so a line
``y = m (x - x0)`` that avoids every dyadic point avoids every corner at every
level.  This module offers

* :func:`is_structurally_admissible` -- a decidable sufficient condition:
  ``x0`` has odd denominator ``> 1`` and ``m`` is a power of two over an odd
  number;
* :func:`dyadic_line_witness` -- a bounded search for integers
  ``p, q, r, s`` with ``m = q 2^(r-s) h^k / (p h^k - t 2^r)``, i.e. a dyadic
  point ``(p/2^r, q/2^s)`` on the line;
* :func:`dyadic_hit_search` -- an independent brute-force scan of dyadic
  points in ``[-1, 2] x [0, 3]``;
* :func:`verify_periodic_sequence` -- simulation of the orbits on
  ``T_0..T_N`` asserting no corner hit and periodic termination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import QuadScalar, to_fraction
from .flow import DEFAULT_CAP, Direction, PhasePoint, trace_orbit
from .geometry import Point
from .analysis import prefractal

__all__ = [
    "AdmissibilityError",
    "Witness",
    "SequenceReport",
    "odd_part",
    "is_structurally_admissible",
    "dyadic_line_witness",
    "witness_slope",
    "dyadic_hit_search",
    "verify_periodic_sequence",
    "admissible_grid",
    "DEFAULT_BOUND",
    "DEFAULT_DYADIC_BOUND",
]

DEFAULT_BOUND = 16
DEFAULT_DYADIC_BOUND = 12


class AdmissibilityError(AssertionError):
    """A structurally admissible orbit met a corner (contradiction)."""


def odd_part(n: int) -> int:
    n = abs(n)
    if n == 0:
        return 0
    return n >> ((n & -n).bit_length() - 1)


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def is_structurally_admissible(x0, m) -> bool:
    """``x0 = t/h^k`` in (0, 1) with odd ``h >= 3`` and ``m = 2^g / odd`` (``m > 0``)."""
    try:
        x = to_fraction(x0)
        s = to_fraction(m)
    except (ValueError, TypeError):
        return False
    if not (0 < x < 1):
        return False
    h = x.denominator
    if h < 3 or h % 2 == 0:
        return False
    if s <= 0:
        return False
    return _is_pow2(s.numerator) and s.denominator % 2 == 1


@dataclass(frozen=True)
class Witness:
    p: int
    q: int
    r: int
    s: int

    @property
    def point(self) -> Point:
        return Point(Fraction(self.p, 2**self.r), Fraction(self.q, 2**self.s))


def witness_slope(x0, w: Witness) -> Fraction | None:
    """Slope of the line through ``(x0, 0)`` and the witness point (None if vertical)."""
    x = to_fraction(x0)
    t, H = x.numerator, x.denominator
    den = w.p * H - t * 2**w.r
    if den == 0:
        return None
    return Fraction(w.q * 2**w.r * H, den * 2**w.s)


def dyadic_line_witness(x0, m, bound: int = DEFAULT_BOUND) -> Witness | None:
    """Search ``p, q in [-bound, bound]``, ``r, s in [0, bound]`` for a dyadic point on the line.

    Irrational slopes return None without searching: no line through a
    rational basepoint with irrational slope contains a second rational
    point.
    """
    if isinstance(m, QuadScalar) and m.b != 0:
        return None
    if isinstance(m, float):
        raise TypeError("slopes must be exact")
    m = to_fraction(m)
    x = to_fraction(x0)
    t, H = x.numerator, x.denominator
    for r in range(bound + 1):
        for p in range(-bound, bound + 1):
            den = p * H - t * 2**r
            if den == 0:
                continue
            # q 2^(r-s) H = m den  ->  q = m den 2^(s-r) / H
            base = m * den / (H * 2**r)
            for s in range(bound + 1):
                q = base * 2**s
                if q.denominator == 1 and -bound <= q.numerator <= bound:
                    return Witness(p, int(q), r, s)
    return None


def dyadic_hit_search(x0, m, c_max: int = DEFAULT_DYADIC_BOUND, d_max: int = DEFAULT_DYADIC_BOUND,
                      box=(-1, 0, 2, 3)) -> Point | None:
    """First dyadic point ``(a/2^c, b/2^d)`` of the box on ``y = m (x - x0)``.

    Scans ``c = 0..c_max`` and, for each, every ``a`` with ``a/2^c`` in the
    box, computing ``y`` exactly; a hit needs ``y`` dyadic with exponent
    ``<= d_max`` and inside the box.  Irrational slopes return None.
    """
    if isinstance(m, QuadScalar) and m.b != 0:
        return None
    m = to_fraction(m)
    x = to_fraction(x0)
    xmin, ymin, xmax, ymax = (Fraction(v) for v in box)
    mn, md = m.numerator, m.denominator
    t, H = x.numerator, x.denominator
    for c in range(c_max + 1):
        scale = 2**c
        a_lo = math.ceil(xmin * scale)
        a_hi = math.floor(xmax * scale)
        # y = mn (a H - t 2^c) / (md H 2^c); dyadic iff the odd part of md*H divides the numerator
        oddden = odd_part(md * H)
        if (a_hi - a_lo + 1) * H * abs(mn) + abs(t) * scale * abs(mn) < 2**62:
            a = np.arange(a_lo, a_hi + 1, dtype=np.int64)
            num = mn * (a * H - t * scale)
            ok = np.nonzero(num % oddden == 0)[0]
            cands = (int(a_lo + i) for i in ok)
        else:  # pragma: no cover - huge inputs
            cands = (a for a in range(a_lo, a_hi + 1) if (mn * (a * H - t * scale)) % oddden == 0)
        for a in cands:
            xv = Fraction(a, scale)
            y = m * (xv - x)
            if not (ymin <= y <= ymax):
                continue
            if _is_pow2(y.denominator) and y.denominator.bit_length() - 1 <= d_max:
                return Point(xv, y)
    return None


@dataclass
class SequenceReport:
    x0: object
    slope: object
    signs: tuple
    periods: list = field(default_factory=list)
    terminations: list = field(default_factory=list)
    vertex_hits: list = field(default_factory=list)
    footprints: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.vertex_hits and all(t == "periodic" for t in self.terminations)


def _vertex_hits(orbit):
    codes = getattr(orbit, "codes", None)
    hits = []
    if orbit.singular_vertex is not None:
        hits.append(orbit.singular_vertex)
    if codes is not None:
        idx = np.nonzero(codes == 3)[0]
        cs = orbit.collisions if len(idx) else None
        hits.extend(cs[int(i)].point for i in idx)
    else:
        vc = orbit.table.vertex_class
        hits.extend(c.point for c in orbit.collisions[1:] if c.point in vc)
    return hits


def verify_periodic_sequence(x0, m, max_level: int, cap: int = DEFAULT_CAP, signs=(1, 1),
                             strict: bool = True, footprints: bool = False) -> SequenceReport:
    """Trace from ``(x0, 0)`` with slope ``m`` on levels ``0..max_level``.

    With ``strict`` a corner hit raises :class:`AdmissibilityError`.
    """
    rep = SequenceReport(x0, m, tuple(signs))
    init = PhasePoint(Point(x0, 0), Direction(signs[0], signs[1], m))
    for n in range(max_level + 1):
        o = trace_orbit(prefractal(n), init, cap=cap)
        hits = _vertex_hits(o)
        rep.terminations.append(o.termination)
        rep.periods.append(o.period)
        if footprints:
            base = prefractal(n).side(0)
            rep.footprints.append(sorted({c.point.x for c in o.collisions if base.contains(c.point)}))
        if hits:
            rep.vertex_hits.append((n, hits))
            if strict:
                raise AdmissibilityError(f"level {n}: orbit from ({x0}, 0) with slope {m} meets corners {hits[:3]}")
    return rep


def admissible_grid(hs=(3, 5, 7), kmax=2, gmax=3, bmax=2, amax=3):
    """The basepoints ``t/h^k`` and slopes ``2^g/(2a+1)^b`` of the standard test grid."""
    xs = sorted({Fraction(t, h**k) for h in hs for k in range(1, kmax + 1) for t in range(1, h**k) if math.gcd(t, h) == 1})
    ms = sorted({Fraction(2**g, (2 * a + 1) ** b) for g in range(gmax + 1) for b in range(bmax + 1) for a in range(amax + 1)})
    return xs, ms
