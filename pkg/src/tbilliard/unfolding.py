"""Unfolding orbits into a square tiling, and closed-form exit predictions.

Unfolding replaces every reflection by a reflection of the table, so the
orbit becomes one straight line.  Because all walls are axis-aligned, the
unfolded displacement of each chord is its absolute displacement with the
initial direction's signs.

Two closed-form predictions are provided for cross-checking the tracer:

* :func:`square_exit_oracle` -- a unit-square orbit from ``(x0, 0)`` with
  slope ``+-1/p`` (``p`` odd) first meets the top side at ``(1 - x0, 1)``,
  at collision ``p + 1``, travelling with the horizontal sign reversed.
* :func:`rect_exit_oracle` -- the reference mod-8 table for the 4 x 1
  rectangle, and :func:`rect_exit_unfolded`, the prediction obtained by
  folding the straight line over the 8-square period directly.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import sign, simplify, to_fraction
from .flow import Direction, Orbit
from .geometry import Point, rectangle_table, square_table

__all__ = [
    "unfold",
    "verify_collinear",
    "square_exit_oracle",
    "rect_exit_oracle",
    "rect_exit_unfolded",
    "first_top_hit",
    "is_dyadic",
    "angle_label",
    "LEFT",
    "RIGHT",
    "THETA",
    "PI_MINUS_THETA",
]

LEFT = "left"
RIGHT = "right"
THETA = "theta0"
PI_MINUS_THETA = "pi-theta0"


def is_dyadic(x) -> bool:
    try:
        f = to_fraction(x)
    except ValueError:
        return False
    d = f.denominator
    return d & (d - 1) == 0


def _on_grid(v, cell: Fraction) -> bool:
    try:
        return (to_fraction(v) / cell).denominator == 1
    except ValueError:
        return False


def unfold(orbit: Orbit, cell, upto: int | None = None) -> list[Point]:
    """Unfolded collision points 0..upto of ``orbit`` in the tiling by squares of side ``cell``.

    Raises ValueError when the table is not a union of ``cell``-squares
    (the orbit then is not confined to the declared tiled region).
    """
    cell = Fraction(cell)
    if cell <= 0:
        raise ValueError("cell side must be positive")
    for v, _ in orbit.table.vertices:
        if not (_on_grid(v.x, cell) and _on_grid(v.y, cell)):
            raise ValueError(f"table vertex {v} is off the {cell}-grid: orbit leaves the tiled region")
    pts = orbit.points if upto is None else orbit.points[: upto + 1]
    d0 = orbit.initial.direction
    out = [pts[0]]
    ux, uy = pts[0]
    for a, b in zip(pts, pts[1:]):
        ux = ux + d0.sx * abs(b.x - a.x)
        uy = uy + d0.sy * abs(b.y - a.y)
        out.append(Point(simplify(ux), simplify(uy)))
    return out


def verify_collinear(points) -> bool:
    """Exact test that every point lies on the line through the first two."""
    if len(points) < 2:
        raise ValueError("need at least two points")
    (x0, y0), (x1, y1) = points[0], points[1]
    dx, dy = x1 - x0, y1 - y0
    if sign(dx) == 0 and sign(dy) == 0:
        raise ValueError("first two points coincide")
    return all(sign(dx * (y - y0) - dy * (x - x0)) == 0 for x, y in points[2:])


def _check_odd(p: int):
    if not isinstance(p, int) or p < 1 or p % 2 == 0:
        raise ValueError("p must be an odd positive integer")


def square_exit_oracle(x0, p: int, slope_sign: int):
    """Predicted first top hit of the unit-square orbit from ``(x0, 0)`` with slope ``slope_sign/p``.

    Returns ``(exit_x, exit_step, exit_direction)``; the direction is the
    direction of travel arriving at the top.  With ``p`` odd the line
    crosses ``p`` vertical walls before reaching height 1, so the
    horizontal sign is reversed whichever half of the base ``x0`` is in.
    """
    _check_odd(p)
    if slope_sign not in (1, -1):
        raise ValueError("slope_sign must be +-1")
    if is_dyadic(x0):
        raise ValueError("x0 must not be a dyadic rational")
    if not (0 < x0 < 1):
        raise ValueError("x0 must lie in (0, 1)")
    return simplify(1 - x0), p + 1, Direction(-slope_sign, 1, Fraction(1, p))


def first_top_hit(orbit: Orbit, top_y=1):
    """Index of the first collision on ``y == top_y`` (None if absent)."""
    for k, c in enumerate(orbit.collisions[1:], start=1):
        if c.point.y == top_y:
            return k
    return None


_RECT_TABLE = {
    # (slope_sign, window) -> {p mod 8: (segment, angle)}
    (1, 1): {1: (RIGHT, THETA), 3: (RIGHT, THETA), 5: (LEFT, THETA), 7: (LEFT, THETA)},
    (1, 2): {1: (RIGHT, PI_MINUS_THETA), 3: (RIGHT, PI_MINUS_THETA), 5: (LEFT, PI_MINUS_THETA), 7: (LEFT, PI_MINUS_THETA)},
    (-1, 1): {5: (RIGHT, THETA), 7: (RIGHT, THETA), 1: (LEFT, THETA), 3: (LEFT, THETA)},
    (-1, 2): {5: (RIGHT, PI_MINUS_THETA), 7: (RIGHT, PI_MINUS_THETA), 1: (LEFT, PI_MINUS_THETA), 3: (LEFT, PI_MINUS_THETA)},
}


def _rect_window(x0) -> int:
    if 1 < x0 < 2:
        return 1
    if 2 < x0 < 3:
        return 2
    raise ValueError("x0 must lie in (1, 2) or (2, 3)")


def rect_exit_oracle(x0, p: int, slope_sign: int):
    """Reference mod-8 table for the 4 x 1 rectangle.

    Returns ``(segment, angle)``: the end unit segment of the top side
    (``"left"`` = [0,1], ``"right"`` = [3,4]) and whether the direction of
    travel there is the initial direction (``"theta0"``) or its mirror in a
    vertical line (``"pi-theta0"``).
    """
    _check_odd(p)
    if slope_sign not in (1, -1):
        raise ValueError("slope_sign must be +-1")
    return _RECT_TABLE[(slope_sign, _rect_window(x0))][p % 8]


def rect_exit_unfolded(x0, p: int, slope_sign: int):
    """Same question answered by folding the straight line over 8 unit squares.

    Top-side hits of the unfolded line are at ``x0 + slope_sign*(2j+1)p``;
    folding ``u mod 8`` onto ``[0, 4]`` gives the actual position and the
    horizontal sign.  Returns ``(segment, angle, exit_x)`` for the first hit
    landing in an end segment.
    """
    _check_odd(p)
    _rect_window(x0)
    for j in range(8):
        u = x0 + slope_sign * (2 * j + 1) * p
        r = u % 8 if not hasattr(u, "d") else _qmod8(u)
        if r <= 4:
            x, flipped = r, False
        else:
            x, flipped = 8 - r, True
        if 0 < x < 1 or 3 < x < 4:
            seg = LEFT if x < 1 else RIGHT
            return seg, (PI_MINUS_THETA if flipped else THETA), simplify(x)
    raise ValueError("no end-segment hit within one period")  # pragma: no cover


def _qmod8(u):
    f = int(float(u) // 8)
    r = u - 8 * f
    while r < 0:
        r = r + 8
    while r >= 8:
        r = r - 8
    return r


def square_table_for_oracle():
    return square_table(1)


def rectangle_table_for_oracle():
    return rectangle_table(4, 1)


def angle_label(initial: Direction, arriving: Direction) -> str:
    """``"theta0"`` if the horizontal sign is unchanged, else ``"pi-theta0"``."""
    return THETA if arriving.sx == initial.sx else PI_MINUS_THETA
