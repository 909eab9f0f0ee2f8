import math
from fractions import Fraction as F

import pytest

from tbilliard.analysis import (
    NotApplicableError,
    UndeterminedError,
    binary_expansion,
    binary_truncate,
    build_nontrivial_path,
    build_sequence,
    check_compatible,
    classify,
    detect_eventually_constant,
    escape_distance,
    first_escape,
    first_return,
    overhang_top_hit,
    prefractal,
    relative_origin,
    verify_escape_distance,
)
from tbilliard.flow import Direction, PhasePoint, trace_orbit
from tbilliard.geometry import Edge, ElusiveAddress, HORIZONTAL, Point, height, word_map


def pp(x, y, sx, sy, s):
    return PhasePoint(Point(F(x), F(y)), Direction(sx, sy, F(s)))


def test_first_escape_infinite_for_midpoint_orbit():
    o = trace_orbit(prefractal(0), pp(F(1, 2), 0, 1, 1, F(1, 4)))
    assert first_escape(o) == math.inf and o.is_periodic


def test_first_escape_before_return():
    o = trace_orbit(prefractal(0), pp(F(1, 3), 0, 1, 1, F(1, 3)))
    assert first_escape(o) == 5 and first_return(o) == 13


def test_first_escape_level_mismatch():
    o = trace_orbit(prefractal(0), pp(F(1, 3), 0, 1, 1, F(1, 3)))
    with pytest.raises(ValueError):
        first_escape(o, prefractal(1))


def test_singular_orbit_has_no_returns():
    o = trace_orbit(prefractal(0), pp(0, 0, 1, 1, 1))
    assert o.return_indices == [] and first_return(o) == math.inf


def test_compatibility():
    a = pp(F(2, 3), 0, 1, 1, 1)
    assert check_compatible((0, a), (1, a))
    assert not check_compatible((0, a), (1, pp(F(2, 3), 0, -1, 1, 1)))
    # (1/4, 0) and (5/4, 1) lie on one line of slope 1, but the square's right side is in between
    assert not check_compatible((0, pp(F(1, 4), 0, 1, 1, 1)), (1, pp(F(5, 4), 1, 1, 1, 1)))
    # not on a common line along the direction
    assert not check_compatible((0, pp(F(1, 4), 0, 1, 1, 1)), (1, pp(F(1, 3), 0, 1, 1, 1)))


def test_example_sequence_periodic_and_compatible():
    seq = build_sequence(F(2, 3), Direction(1, 1, F(1)), 2)
    assert seq.compatible and seq.all_periodic
    assert [r.orbit.period for r in seq.per_level] == [14, 24, 34]
    assert detect_eventually_constant(seq) is None


def test_prop_escape_before_return_levels():
    seq = build_sequence(F(1, 3), Direction(1, 1, F(1, 3)), 6)
    assert all(r.tau < r.upsilon for r in seq.per_level)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_eventually_constant_from_zero(k):
    seq = build_sequence(F(1, 2), Direction(1, 1, F(1, 2**k)), 4)
    assert detect_eventually_constant(seq) == 0


def test_eventually_constant_from_one():
    seq = build_sequence(F(5, 4), Direction(1, 1, F(1, 4)), 4, y0=1)
    assert detect_eventually_constant(seq) == 1


def test_eventually_constant_needs_periodic():
    seq = build_sequence(F(1, 2), Direction(1, 1, F(1, 4)), 1)
    seq.per_level[0].orbit.termination = "cap_reached"
    with pytest.raises(UndeterminedError):
        detect_eventually_constant(seq)


def test_relative_origin():
    base = prefractal(0).side(0)
    assert relative_origin(Direction(1, 1, F(1)), base) == Point(F(0), F(0))
    assert relative_origin(Direction(-1, 1, F(1)), base) == Point(F(1), F(0))
    seg = Edge(Point(F(1), F(3, 2)), Point(F(3, 2), F(3, 2)), HORIZONTAL, 0, 0)
    assert relative_origin(Direction(1, 1, F(1)), seg) == Point(F(1), F(3, 2))


@pytest.mark.parametrize("x,k,want", [(F(1, 3), 1, F(0)), (F(1, 3), 2, F(1, 4)), (F(2, 3), 1, F(1, 2))])
def test_binary_truncate(x, k, want):
    assert binary_truncate(x, k) == want


def test_binary_truncate_rejects_dyadic():
    with pytest.raises(ValueError):
        binary_truncate(F(1, 4), 3)


def test_binary_expansion():
    e = binary_expansion(F(1, 3))
    assert (e.preperiod, e.period) == ("", "01") and e.digits(5) == "01010"
    e = binary_expansion(F(1, 6))
    assert (e.preperiod, e.period) == ("0", "01")


def test_escape_distance_examples():
    seq = build_sequence(F(1, 3), Direction(1, 1, F(1, 3)), 1)
    assert escape_distance(seq.record(0)) == F(1, 3)
    assert escape_distance(seq.record(1)) == F(1, 12)
    assert verify_escape_distance(seq, 0) and verify_escape_distance(seq, 1)


def test_escape_distance_not_applicable():
    seq = build_sequence(F(1, 2), Direction(1, 1, F(1, 4)), 0)
    with pytest.raises(NotApplicableError):
        verify_escape_distance(seq, 0)


@pytest.mark.parametrize(
    "sx,limit,address",
    [(1, F(-2, 5), ElusiveAddress("", "LLRR")), (-1, F(4, 5), ElusiveAddress("", "RLLR"))],
)
def test_nontrivial_path_limits(sx, limit, address):
    seq = build_sequence(F(1, 3), Direction(sx, 1, F(1, 3)), 6)
    path = build_nontrivial_path(seq)
    assert path.limit_point == Point(limit, F(3))
    assert path.address == address
    assert path.terminal_heights == [height(n) for n in range(7)]
    lo, hi = path.limit_interval
    assert lo <= limit <= hi and hi - lo == F(3, 2**7)
    # each truncated orbit extends the previous escape word
    assert all(b.startswith(a) for a, b in zip(path.escape_words, path.escape_words[1:]))


def test_nontrivial_path_needs_finite_escape():
    seq = build_sequence(F(1, 2), Direction(1, 1, F(1, 4)), 2)
    with pytest.raises(NotApplicableError):
        build_nontrivial_path(seq)


def test_classification_periodic():
    seq = build_sequence(F(1, 3), Direction(1, 1, F(1, 3)), 6)
    c = classify(seq)
    assert c.verdict == "periodic"
    for n, g in enumerate(c.evidence["first_return_gaps"]):
        assert g < F(2) ** (1 - n)


def test_classification_eventually_constant_is_periodic():
    seq = build_sequence(F(5, 4), Direction(1, 1, F(1, 4)), 3, y0=1)
    assert classify(seq).verdict == "periodic"


def test_classification_singular():
    seq = build_sequence(F(0), Direction(1, 1, F(1)), 2)
    assert classify(seq).verdict == "singular"


@pytest.mark.parametrize("level,word", [(0, ""), (1, "L"), (2, "RL")])
@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("right", [True, False])
def test_overhang_midpoint_orbit(level, word, n, right):
    r = overhang_top_hit(level, word, n, right)
    assert r.ok
    # the top of the copy's bar is the image of y = 3/2
    assert r.top_point.y == word_map(word)((F(0), F(3, 2)))[1]
