import json
from fractions import Fraction as F

from tbilliard.analysis import build_nontrivial_path, build_sequence, classify, prefractal
from tbilliard.flow import Direction, PhasePoint, trace_exact, trace_orbit
from tbilliard.geometry import Point, square_table
from tbilliard.irrational import Y0, SLOPE
from tbilliard.serialize import (
    boundary_svg,
    boundary_to_json,
    decimal12,
    dumps,
    escape_distance_rows,
    orbit_from_json,
    orbit_svg,
    orbit_to_json,
    path_svg,
    path_to_json,
    rows_to_csv,
    sequence_to_json,
)


def _round_trip(o):
    back = orbit_from_json(json.loads(dumps(orbit_to_json(o))))
    assert back.collisions == o.collisions
    assert back.initial == o.initial
    assert (back.termination, back.period, back.singular_vertex) == (o.termination, o.period, o.singular_vertex)
    assert back.escape_indices == list(o.escape_indices)
    assert back.return_indices == list(o.return_indices)
    return back


def test_rational_orbit_round_trip():
    o = trace_orbit(prefractal(2), PhasePoint(Point(F(1, 3), F(0)), Direction(1, 1, F(1, 3))))
    _round_trip(o)


def test_quadratic_orbit_round_trip():
    o = trace_exact(prefractal(0), PhasePoint(Point(Y0, F(0)), Direction(-1, 1, SLOPE)), 2000)
    back = _round_trip(o)
    assert back.is_singular


def test_non_prefractal_table_round_trip():
    o = trace_exact(square_table(1), PhasePoint(Point(F(1, 3), F(0)), Direction(1, 1, F(1))), 10)
    _round_trip(o)


def test_boundary_json():
    d = boundary_to_json(prefractal(0))
    assert len(d["vertices"]) == 8 and d["vertices"][0] == ["0/1", "0/1"]
    assert d["height"] == "3/2" and d["perimeter"] == "7/1"
    assert sorted(d["removed_words"]) == ["L", "R"]


def test_svg_deterministic_and_captioned():
    o = trace_orbit(prefractal(1), PhasePoint(Point(F(2, 3), F(0)), Direction(1, 1, F(1))))
    a, b = orbit_svg(o), orbit_svg(o)
    assert a == b and a.startswith("<?xml")
    assert "start (2/3, 0/1)" in a and "period 24" in a
    assert boundary_svg(prefractal(2)) == boundary_svg(prefractal(2))


def test_decimal12():
    assert decimal12(F(1, 3)) == "0.333333333333"
    assert decimal12(F(3, 2)) == "1.5"
    assert decimal12(Y0).startswith("0.0")


def test_sequence_and_path_reports():
    seq = build_sequence(F(1, 3), Direction(1, 1, F(1, 3)), 3)
    d = json.loads(dumps(sequence_to_json(seq, classify(seq))))
    assert d["per_level"][0]["tau"] == 5 and d["classification"]["verdict"] == "periodic"
    p = build_nontrivial_path(seq)
    pj = path_to_json(p)
    assert pj["limit_point"] == ["-2/5", "3/1"] and pj["address"] == {"preperiod": "", "period": "LLRR"}
    assert "limit (-2/5, 3)" in path_svg(p)


def test_infinite_tau_serialises():
    seq = build_sequence(F(1, 2), Direction(1, 1, F(1, 4)), 1)
    d = json.loads(dumps(sequence_to_json(seq)))
    assert d["per_level"][0]["tau"] == "inf"


def test_escape_distance_csv():
    seq = build_sequence(F(1, 3), Direction(1, 1, F(1, 3)), 2)
    header, rows = escape_distance_rows(seq, F(1, 3), 1)
    text = rows_to_csv(header, rows)
    assert text.splitlines()[0] == "level,tau,escape_x,distance,expected,match"
    assert text.splitlines()[1] == "0,5,-1/6,1/3,1/3,True"
