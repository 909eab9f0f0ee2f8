"""Rational orbits through the integer cell-walk kernel.

A dyadic table is rasterised once (cached on the table object) into an
occupancy grid with one empty cell of padding on every side.  Orbit data are
converted to integer units, walked by :func:`tbilliard.kernels.walk`, and
converted back to exact Fractions only when the collision list is read.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import kernels
from .exact import to_fraction
from .flow import CAP_REACHED, PERIODIC, SINGULAR, Direction, GeometryError, Orbit, PhasePoint, _initial_side
from .geometry import HORIZONTAL, Point, Table

__all__ = ["Raster", "raster", "LatticeOrbit", "trace_lattice", "LatticeUnsupported"]

_INT64_LIMIT = 2**62


class LatticeUnsupported(ValueError):
    """The orbit data do not fit the integer kernel (irrational or too large)."""


class Raster:
    """Occupancy grid of a dyadic table."""

    def __init__(self, table: Table):
        c = table.cell_size
        xmin, ymin, xmax, ymax = (to_fraction(v) for v in table.bbox)
        self.cell = c
        self.x0 = xmin - c
        self.y0 = ymin - c
        nx = int((xmax - xmin) / c) + 2
        ny = int((ymax - ymin) / c) + 2
        flip = np.zeros((nx + 1, ny), dtype=np.int8)
        for s in table.sides:
            if s.orientation == HORIZONTAL:
                continue
            k = int((to_fraction(s.p.x) - self.x0) / c)
            j0 = int((to_fraction(s.p.y) - self.y0) / c)
            j1 = int((to_fraction(s.q.y) - self.y0) / c)
            flip[k, j0:j1] ^= 1
        self.occ = (np.cumsum(flip, axis=0)[:nx] % 2).astype(np.uint8)
        self.nx, self.ny = nx, ny

    def cell_units(self, x, y) -> tuple[Fraction, Fraction]:
        return (to_fraction(x) - self.x0) / self.cell, (to_fraction(y) - self.y0) / self.cell


def raster(table: Table) -> Raster:
    r = table.__dict__.get("_raster")
    if r is None:
        r = Raster(table)
        table.__dict__["_raster"] = r
    return r


class LatticeOrbit(Orbit):
    """Orbit whose collisions are stored as integer arrays and materialised lazily."""

    def __init__(self, table, initial, arrays, to_point, **kw):
        super().__init__(table, initial, None, **kw)
        self._arrays = arrays
        self._to_point = to_point

    @property
    def n_collisions(self) -> int:
        return len(self._arrays[0]) - 1

    @property
    def collisions(self) -> list[PhasePoint]:
        if self._collisions is None:
            xs, ys, sxs, sys_, _ = self._arrays
            slope = self.initial.direction.slope
            out = [self.initial]
            for k in range(1, len(xs)):
                out.append(PhasePoint(self._to_point(int(xs[k]), int(ys[k])), Direction(int(sxs[k]), int(sys_[k]), slope)))
            self._collisions = out
        return self._collisions

    @property
    def codes(self) -> np.ndarray:
        return self._arrays[4]

    def signs_array(self) -> np.ndarray:
        return np.stack([self._arrays[2], self._arrays[3]], axis=1)


def _units(table: Table, init: PhasePoint):
    r = raster(table)
    slope = to_fraction(init.direction.slope)
    a, b = slope.numerator, slope.denominator
    cx, cy = r.cell_units(init.point.x, init.point.y)
    D = math.lcm(cx.denominator, cy.denominator)
    U = D * a * b
    X0 = cx * U
    Y0 = cy * U
    if X0.denominator != 1 or Y0.denominator != 1:  # pragma: no cover - by construction
        raise GeometryError("non-integral lattice start")
    X0, Y0 = int(X0), int(Y0)
    span = (max(r.nx, r.ny) + 1) * U
    if span >= _INT64_LIMIT or U * max(a, b) >= _INT64_LIMIT:
        raise LatticeUnsupported("orbit data overflow 64-bit lattice units")
    return r, U, a, b, X0, Y0


def trace_lattice(table: Table, init: PhasePoint, cap: int, use_numba: bool | None = None) -> Orbit:
    """Run the integer kernel; falls back to the exact tracer when unsupported."""
    from .flow import trace_exact

    if cap < 1:
        raise ValueError("cap must be >= 1")
    try:
        r, U, a, b, X0, Y0 = _units(table, init)
    except (LatticeUnsupported, ValueError):
        return trace_exact(table, init, cap)
    d = init.direction
    status, xs, ys, sxs, sys_, codes, sing = kernels.walk(r.occ, U, a, b, X0, Y0, d.sx, d.sy, cap, use_numba)
    if status == kernels.STATUS_PINCH:
        raise GeometryError(f"lattice walk left the table or met a pinch point from {init}")

    scale = r.cell / U

    def to_point(X: int, Y: int) -> Point:
        return Point(r.x0 + X * scale, r.y0 + Y * scale)

    termination = {kernels.STATUS_CAP: CAP_REACHED, kernels.STATUS_PERIODIC: PERIODIC, kernels.STATUS_SINGULAR: SINGULAR}[status]
    n = len(xs) - 1
    period = n if status == kernels.STATUS_PERIODIC else None
    vertex = to_point(*sing) if status == kernels.STATUS_SINGULAR else None

    escapes, endpoints = _escapes(table, r, U, xs, ys)
    returns = _returns(table, init, r, U, xs, ys)
    return LatticeOrbit(
        table,
        init,
        (xs, ys, sxs, sys_, codes),
        to_point,
        termination=termination,
        period=period,
        singular_vertex=vertex,
        escape_indices=escapes,
        return_indices=returns,
        endpoint_escapes=endpoints,
        cap=cap,
    )


def _seg_units(r: Raster, U: int, seg):
    px, py = r.cell_units(seg.p.x, seg.p.y)
    qx, qy = r.cell_units(seg.q.x, seg.q.y)
    return int(px * U), int(py * U), int(qx * U), int(qy * U)


def _escapes(table, r, U, xs, ys):
    if not table.removed_segments or len(xs) <= 1:
        return [], []
    X, Y = xs[1:], ys[1:]
    hit = np.zeros(len(X), dtype=bool)
    end = np.zeros(len(X), dtype=bool)
    for seg in table.removed_segments:
        px, py, qx, qy = _seg_units(r, U, seg)
        if py == qy:
            m = (Y == py) & (X >= px) & (X <= qx)
            e = m & ((X == px) | (X == qx))
        else:
            m = (X == px) & (Y >= py) & (Y <= qy)
            e = m & ((Y == py) | (Y == qy))
        hit |= m
        end |= e
    return (np.nonzero(hit)[0] + 1).tolist(), (np.nonzero(end)[0] + 1).tolist()


def _returns(table, init, r, U, xs, ys):
    side = _initial_side(table, init.point)
    if side is None or len(xs) <= 1:
        return []
    px, py, qx, qy = _seg_units(r, U, side)
    X, Y = xs[1:], ys[1:]
    if py == qy:
        m = (Y == py) & (X >= px) & (X <= qx)
    else:
        m = (X == px) & (Y >= py) & (Y <= qy)
    return (np.nonzero(m)[0] + 1).tolist()
