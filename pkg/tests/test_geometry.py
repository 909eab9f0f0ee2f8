from fractions import Fraction as F

import pytest

from tbilliard.geometry import (
    CONVEX,
    LEFT_MAP,
    REFLEX,
    RIGHT_MAP,
    ElusiveAddress,
    Point,
    address_to_point,
    build_prefractal,
    copy_count,
    elusive_set,
    height,
    locate,
    point_to_address,
)

T0_CYCLE = [(0, 0), (1, 0), (1, 1), (F(3, 2), 1), (F(3, 2), F(3, 2)), (F(-1, 2), F(3, 2)), (F(-1, 2), 1), (0, 1)]


def test_level0_vertex_cycle():
    T = build_prefractal(0)
    verts = [v for v, _ in T.vertices]
    assert verts == [Point(F(x), F(y)) for x, y in T0_CYCLE]
    reflex = {v for v, c in T.vertices if c == REFLEX}
    assert reflex == {Point(F(1), F(1)), Point(F(0), F(1))}
    assert all(c == CONVEX for v, c in T.vertices if v not in reflex)


def test_level0_removed_segments():
    T = build_prefractal(0)
    segs = {(e.p, e.q) for e in T.removed_segments}
    assert segs == {
        (Point(F(-1, 2), F(3, 2)), Point(F(0), F(3, 2))),
        (Point(F(1), F(3, 2)), Point(F(3, 2), F(3, 2))),
    }


@pytest.mark.parametrize("n", range(0, 9))
def test_height_closed_form(n):
    assert height(n) == 3 * (1 - F(1, 2 ** (n + 1)))
    assert height(n) == sum(F(3, 2 ** (i + 1)) for i in range(n + 1))
    assert 3 - height(n) == F(3, 2 ** (n + 1))


@pytest.mark.parametrize("n", range(0, 5))
def test_structure_counts(n):
    T = build_prefractal(n)
    assert T.copy_count == copy_count(n) == 2 ** (n + 1) - 1
    assert len(T.removed_segments) == 2 ** (n + 1)
    for e in T.removed_segments:
        assert e.p.y == e.q.y == T.height
        assert e.length == F(1, 2 ** (n + 1))


@pytest.mark.parametrize("n", range(0, 6))
def test_perimeter(n):
    # each level-j copy adds its scaled perimeter minus its base and the parent's removed segment
    assert build_prefractal(n).perimeter == 7 + 5 * n


def test_level2_copies_and_height():
    T = build_prefractal(2)
    assert T.copy_count == 7 and T.height == F(21, 8)


@pytest.mark.parametrize("n", range(0, 4))
def test_boundary_consistency_across_levels(n):
    A, B = build_prefractal(n), build_prefractal(n + 1)
    lowA = {(v, c) for v, c in A.vertices if v.y < A.height}
    lowB = {(v, c) for v, c in B.vertices if v.y < A.height}
    assert lowA == lowB
    for e in A.removed_segments:
        # the removed segment becomes interior; its endpoints stay on the boundary
        mid = Point((e.p.x + e.q.x) / 2, e.p.y)
        assert locate(B, mid).kind == "interior"
        assert locate(B, e.p).kind in ("on_edge", "at_vertex")
        assert locate(B, e.q).kind in ("on_edge", "at_vertex")


def test_elusive_set_is_invariant():
    a, b = elusive_set()
    assert (a, b) == (Point(F(-1), F(3)), Point(F(2), F(3)))
    for f in (LEFT_MAP, RIGHT_MAP):
        pa, pb = f((a.x, a.y)), f((b.x, b.y))
        assert pa[1] == pb[1] == 3 and F(-1) <= pa[0] <= F(2) and F(-1) <= pb[0] <= F(2)
    images = sorted([LEFT_MAP((a.x, 3))[0], LEFT_MAP((b.x, 3))[0], RIGHT_MAP((a.x, 3))[0], RIGHT_MAP((b.x, 3))[0]])
    assert images == [F(-1), F(1, 2), F(1, 2), F(2)]  # the two images tile E


@pytest.mark.parametrize(
    "addr,x",
    [(ElusiveAddress("", "R"), F(2)), (ElusiveAddress("", "L"), F(-1)), (ElusiveAddress("L", "R"), F(1, 2))],
)
def test_address_to_point(addr, x):
    assert address_to_point(addr) == Point(x, F(3))


@pytest.mark.parametrize(
    "x,pre,per",
    [(F(2), "", "R"), (F(-1), "", "L"), (F(1, 2), "R", "L"), (F(-2, 5), "", "LLRR")],
)
def test_point_to_address(x, pre, per):
    a = point_to_address(x)
    assert (a.preperiod, a.period) == (pre, per)
    assert address_to_point(a).x == x


def test_point_to_address_domain():
    with pytest.raises(ValueError):
        point_to_address(F(3))


def test_address_canonical_form():
    assert ElusiveAddress("LR", "RR").canonical() == ElusiveAddress("L", "R")
    assert ElusiveAddress("", "LRLR").canonical() == ElusiveAddress("", "LR")


def test_locate_examples():
    T = build_prefractal(0)
    loc = locate(T, Point(F(1, 2), F(0)))
    assert loc.kind == "on_edge" and loc.parameter == F(1, 2) and loc.edge.side_id == T.side(0).side_id
    loc = locate(T, Point(F(1), F(1)))
    assert loc.kind == "at_vertex" and loc.angle_class == REFLEX
    assert locate(T, Point(F(5), F(5))).kind == "exterior"
    assert locate(T, Point(F(1, 2), F(1, 2))).kind == "interior"
