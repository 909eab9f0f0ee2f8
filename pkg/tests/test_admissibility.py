from fractions import Fraction as F

import pytest

from tbilliard.admissibility import (
    AdmissibilityError,
    Witness,
    admissible_grid,
    dyadic_hit_search,
    dyadic_line_witness,
    is_structurally_admissible,
    odd_part,
    verify_periodic_sequence,
    witness_slope,
)
from tbilliard.exact import QuadScalar
from tbilliard.geometry import Point


@pytest.mark.parametrize(
    "x0,m,want",
    [(F(1, 3), F(1, 3), True), (F(1, 3), F(2, 5), True), (F(1, 3), F(1, 6), False), (F(1, 2), F(1, 3), False)],
)
def test_structural_admissibility(x0, m, want):
    assert is_structurally_admissible(x0, m) is want


def test_structural_rejects_irrational_and_negative():
    assert not is_structurally_admissible(F(1, 3), QuadScalar(0, 1, 2))
    assert not is_structurally_admissible(F(1, 3), F(-1, 3))


def test_line_witness_example():
    w = dyadic_line_witness(F(1, 3), F(6))
    assert w is not None
    assert witness_slope(F(1, 3), w) == 6
    assert w.point.y == 6 * (w.point.x - F(1, 3))


def test_line_witness_none_for_admissible():
    assert dyadic_line_witness(F(1, 3), F(1, 3), bound=12) is None


def test_irrational_slope_has_no_witness():
    m = QuadScalar(0, F(1, 34), 2)
    assert dyadic_line_witness(F(1, 3), m) is None
    assert dyadic_hit_search(F(1, 3), m) is None


def test_dyadic_hit_search_examples():
    assert dyadic_hit_search(F(0), F(1)) == Point(F(0), F(0))
    assert dyadic_hit_search(F(1, 3), F(1, 3)) is None
    assert dyadic_hit_search(F(1, 3), F(6)) == Point(F(1, 2), F(1))


def test_constructed_witness_is_found():
    x0 = F(2, 5)
    w = Witness(1, 3, 1, 2)
    m = witness_slope(x0, w)
    hit = dyadic_hit_search(x0, m)
    assert hit is not None and hit.y == m * (hit.x - x0)


def test_odd_part():
    assert [odd_part(v) for v in (0, 1, 12, -40, 7)] == [0, 1, 3, 5, 7]


def test_grid_shape():
    xs, ms = admissible_grid()
    assert len(xs) == 80 and len(ms) == 28
    assert all(is_structurally_admissible(x, m) for x in xs for m in ms)


def test_periodic_sequence_report():
    rep = verify_periodic_sequence(F(1, 3), F(1, 3), 3, footprints=True)
    assert rep.ok and rep.terminations == ["periodic"] * 4
    assert all(len(f) > 0 for f in rep.footprints)


def test_strict_mode_raises_on_corner():
    with pytest.raises(AdmissibilityError):
        verify_periodic_sequence(F(1, 2), F(2), 1)
    rep = verify_periodic_sequence(F(1, 2), F(2), 1, strict=False)
    assert not rep.ok and rep.vertex_hits
