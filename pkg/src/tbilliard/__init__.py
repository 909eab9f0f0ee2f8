"""Exact billiard dynamics on the prefractal approximations of the T-fractal.

Geometry, collisions and all checked identities use exact arithmetic
(Python Fractions and :class:`~tbilliard.exact.QuadScalar` for
``a + b*sqrt(d)``); decimals appear only in rendering.
"""

from .exact import QuadScalar, format_scalar, parse_scalar, sqrt2
from .geometry import (
    ElusiveAddress,
    Point,
    PrefractalBoundary,
    Table,
    address_to_point,
    build_prefractal,
    point_to_address,
)
from .flow import Direction, Orbit, PhasePoint, next_collision, trace_exact, trace_orbit
from .analysis import (
    build_nontrivial_path,
    build_sequence,
    classify,
    detect_eventually_constant,
    first_escape,
    first_return,
    prefractal,
)
from .admissibility import (
    dyadic_hit_search,
    dyadic_line_witness,
    is_structurally_admissible,
    verify_periodic_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "QuadScalar",
    "format_scalar",
    "parse_scalar",
    "sqrt2",
    "ElusiveAddress",
    "Point",
    "PrefractalBoundary",
    "Table",
    "address_to_point",
    "build_prefractal",
    "point_to_address",
    "Direction",
    "Orbit",
    "PhasePoint",
    "next_collision",
    "trace_exact",
    "trace_orbit",
    "build_nontrivial_path",
    "build_sequence",
    "classify",
    "detect_eventually_constant",
    "first_escape",
    "first_return",
    "prefractal",
    "dyadic_hit_search",
    "dyadic_line_witness",
    "is_structurally_admissible",
    "verify_periodic_sequence",
]
