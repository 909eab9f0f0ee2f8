"""The billiard map on an axis-aligned table, in exact arithmetic.

Directions are stored as quadrant signs plus a positive slope magnitude, so a
reflection off an axis-aligned wall is a sign flip and the slope never
changes along an orbit.  :func:`trace_orbit` dispatches rational inputs to
the integer lattice kernel (see :mod:`tbilliard.lattice`) and everything
else, including values in Q(sqrt 2), to the edge-index tracer below.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .exact import is_rational, simplify
from .geometry import CONVEX, HORIZONTAL, Edge, Point, Table, locate

__all__ = [
    "Direction",
    "PhasePoint",
    "Hit",
    "Orbit",
    "GeometryError",
    "next_collision",
    "reflect",
    "vertex_rule",
    "billiard_step",
    "trace_orbit",
    "trace_exact",
    "check_inward",
    "as_phase_point",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 10**6

PERIODIC = "periodic"
SINGULAR = "singular"
CAP_REACHED = "cap_reached"
STOPPED = "stopped"


class GeometryError(RuntimeError):
    """Raised when the table geometry contradicts an invariant (a bug)."""


@dataclass(frozen=True)
class Direction:
    """Unit-free direction: signs of (dx, dy) and |dy/dx|; ``slope=None`` is vertical."""

    sx: int
    sy: int
    slope: object

    def __post_init__(self):
        if self.sx not in (-1, 1) or self.sy not in (-1, 1):
            raise ValueError("direction signs must be +-1")
        if self.slope is not None:
            object.__setattr__(self, "slope", simplify(self.slope))
            if self.slope <= 0:
                raise ValueError("slope magnitude must be positive")

    @property
    def is_vertical(self) -> bool:
        return self.slope is None

    def flipped(self, fx: bool, fy: bool) -> "Direction":
        return Direction(-self.sx if fx else self.sx, -self.sy if fy else self.sy, self.slope)

    def reversed(self) -> "Direction":
        return Direction(-self.sx, -self.sy, self.slope)

    def mirrored(self) -> "Direction":
        """Mirror image in a vertical line (theta -> pi - theta)."""
        return Direction(-self.sx, self.sy, self.slope)

    @property
    def signs(self) -> tuple[int, int]:
        return self.sx, self.sy

    def __str__(self):
        return f"({self.sx:+d},{self.sy:+d}, slope {self.slope})"


@dataclass(frozen=True)
class PhasePoint:
    point: Point
    direction: Direction

    def __post_init__(self):
        object.__setattr__(self, "point", Point(simplify(self.point[0]), simplify(self.point[1])))


@dataclass(frozen=True)
class Hit:
    point: Point
    edge: Edge | None = None
    vertex_class: str | None = None

    @property
    def at_vertex(self) -> bool:
        return self.vertex_class is not None


def reflect(direction: Direction, orientation: str) -> Direction:
    if orientation == HORIZONTAL:
        return direction.flipped(False, True)
    return direction.flipped(True, False)


def vertex_rule(vertex_class: str, incoming: Direction) -> Direction | None:
    """Retro-reflect at a right-angle corner; ``None`` (terminate) at a reflex one."""
    if vertex_class == CONVEX:
        return incoming.reversed()
    return None


def next_collision(table: Table, state: PhasePoint) -> Hit:
    """First boundary point strictly ahead of ``state`` along its direction."""
    x, y = state.point
    d = state.direction
    if d.is_vertical:
        raise ValueError("vertical flow is not supported")
    s = d.slope

    hit_dx = None
    hit_pt = None
    hit_edge = None
    ys = table.h_coords
    if d.sy > 0:
        cand = ys[bisect.bisect_right(ys, y):]
    else:
        cand = reversed(ys[: bisect.bisect_left(ys, y)])
    for yc in cand:
        dx = abs(yc - y) / s
        xc = x + dx if d.sx > 0 else x - dx
        e = table.edge_at_h(yc, xc)
        if e is not None:
            hit_dx, hit_pt, hit_edge = dx, Point(simplify(xc), yc), e
            break

    xs = table.v_coords
    if d.sx > 0:
        vcand = xs[bisect.bisect_right(xs, x):]
    else:
        vcand = reversed(xs[: bisect.bisect_left(xs, x)])
    for xv in vcand:
        dx = abs(xv - x)
        if hit_dx is not None and dx > hit_dx:
            break
        yv = y + s * dx if d.sy > 0 else y - s * dx
        e = table.edge_at_v(xv, yv)
        if e is not None:
            if hit_dx is None or dx < hit_dx:
                hit_dx, hit_pt, hit_edge = dx, Point(xv, simplify(yv)), e
            break

    if hit_pt is None:
        raise GeometryError(f"no boundary ahead of {state} on {table!r}")
    cls = table.vertex_class.get(hit_pt)
    if cls is not None:
        return Hit(hit_pt, None, cls)
    return Hit(hit_pt, hit_edge, None)


class Orbit:
    """Collision sequence of one orbit.

    ``collisions[0]`` is the initial state; entry ``k`` holds the k-th
    collision point together with the outgoing (reflected) direction.
    """

    def __init__(
        self,
        table: Table,
        initial: PhasePoint,
        collisions: list[PhasePoint] | None,
        termination: str,
        period: int | None = None,
        singular_vertex: Point | None = None,
        escape_indices: list[int] | None = None,
        return_indices: list[int] | None = None,
        endpoint_escapes: list[int] | None = None,
        cap: int | None = None,
    ):
        self.table = table
        self.level = getattr(table, "n", None)
        self.initial = initial
        self._collisions = collisions
        self.termination = termination
        self.period = period
        self.singular_vertex = singular_vertex
        self.escape_indices = escape_indices or []
        self.return_indices = return_indices or []
        self.endpoint_escapes = endpoint_escapes or []
        self.cap = cap

    @property
    def collisions(self) -> list[PhasePoint]:
        return self._collisions

    @property
    def n_collisions(self) -> int:
        return len(self.collisions) - 1

    @property
    def points(self) -> list[Point]:
        return [c.point for c in self.collisions]

    @property
    def is_periodic(self) -> bool:
        return self.termination == PERIODIC

    @property
    def is_singular(self) -> bool:
        return self.termination == SINGULAR

    def incoming(self, k: int) -> Direction:
        """Direction of travel just before collision k."""
        return self.collisions[k - 1].direction

    @property
    def slope(self):
        return self.initial.direction.slope

    def path(self, upto: int | None = None) -> list[Point]:
        """Polyline through collisions 0..upto (inclusive); singular vertex appended."""
        pts = self.points
        if upto is not None:
            return pts[: upto + 1]
        if self.singular_vertex is not None:
            return pts + [self.singular_vertex]
        return pts

    def __repr__(self):
        extra = f" period={self.period}" if self.period else ""
        return f"<Orbit on {self.table.name}: {self.n_collisions} collisions, {self.termination}{extra}>"


def _initial_side(table: Table, pt: Point) -> Edge | None:
    loc = locate(table, pt)
    if loc.kind == "on_edge":
        return table.side(loc.edge.side_id)
    return None


def check_inward(table: Table, init: PhasePoint) -> None:
    """Raise ValueError unless ``init`` sits on the boundary pointing inside.

    The test is exact: the midpoint of the first chord must be interior.
    """
    if init.direction.is_vertical:
        raise ValueError("vertical initial directions are not supported")
    loc = locate(table, init.point)
    if loc.kind in ("interior", "exterior"):
        raise ValueError(f"initial point {init.point} is not on the boundary")
    if loc.kind == "at_vertex" and loc.angle_class != CONVEX:
        raise ValueError(f"initial point {init.point} is a reflex vertex")
    try:
        hit = next_collision(table, init)
    except GeometryError:
        raise ValueError(f"direction {init.direction} at {init.point} leaves the table") from None
    mid = Point((init.point.x + hit.point.x) / 2, (init.point.y + hit.point.y) / 2)
    if locate(table, mid).kind != "interior":
        raise ValueError(f"direction {init.direction} is not inward at {init.point}")


def billiard_step(table: Table, state: PhasePoint) -> PhasePoint | None:
    """One application of the billiard map; ``None`` when the orbit terminates."""
    hit = next_collision(table, state)
    if hit.at_vertex:
        nd = vertex_rule(hit.vertex_class, state.direction)
        if nd is None:
            return None
    else:
        nd = reflect(state.direction, hit.edge.orientation)
    return PhasePoint(hit.point, nd)


def trace_exact(table: Table, init: PhasePoint, cap: int = DEFAULT_CAP, stop=None) -> Orbit:
    """Reference tracer over the edge index; works for any exact scalar type.

    ``stop(k, state)`` may end the trace early (termination ``"stopped"``).
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    side = _initial_side(table, init.point)
    collisions = [init]
    escapes, endpoints, returns = [], [], []
    state = init
    termination, period, vertex = CAP_REACHED, None, None
    for k in range(1, cap + 1):
        hit = next_collision(table, state)
        if hit.at_vertex:
            nd = vertex_rule(hit.vertex_class, state.direction)
            if nd is None:
                termination, vertex = SINGULAR, hit.point
                break
        else:
            nd = reflect(state.direction, hit.edge.orientation)
        state = PhasePoint(hit.point, nd)
        collisions.append(state)
        rem = table.on_removed(hit.point)
        if rem is not None:
            escapes.append(k)
            if rem[1]:
                endpoints.append(k)
        if side is not None and side.contains(hit.point):
            returns.append(k)
        if state == init:
            termination, period = PERIODIC, k
            break
        if stop is not None and stop(k, state):
            termination = STOPPED
            break
    return Orbit(
        table,
        init,
        collisions,
        termination,
        period=period,
        singular_vertex=vertex,
        escape_indices=escapes,
        return_indices=returns,
        endpoint_escapes=endpoints,
        cap=cap,
    )


def _all_rational(init: PhasePoint) -> bool:
    d = init.direction
    return is_rational(init.point.x) and is_rational(init.point.y) and is_rational(d.slope)


def trace_orbit(table: Table, init: PhasePoint, cap: int = DEFAULT_CAP, backend: str = "auto") -> Orbit:
    """Iterate the billiard map until exact recurrence, a reflex corner, or ``cap``.

    ``backend`` is ``"lattice"`` (integer kernel, rational data only),
    ``"exact"`` (edge-index tracer) or ``"auto"``.
    """
    check_inward(table, init)
    if backend == "auto":
        backend = "lattice" if _all_rational(init) else "exact"
    if backend == "lattice":
        from .lattice import trace_lattice

        return trace_lattice(table, init, cap)
    if backend == "exact":
        return trace_exact(table, init, cap)
    raise ValueError(f"unknown backend {backend!r}")


def as_phase_point(x, y, sx: int, sy: int, slope) -> PhasePoint:
    return PhasePoint(Point(x, y), Direction(sx, sy, slope))


def is_inf(v) -> bool:
    return isinstance(v, float) and math.isinf(v)
