import json

import pytest

from tbilliard.cli import main


def test_geometry_stdout(capsys):
    assert main(["geometry", "--level", "0"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert len(d["vertices"]) == 8


def test_geometry_files(tmp_path):
    assert main(["geometry", "--level", "2", "--out", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "T2.json").read_text())
    assert d["height"] == "21/8" and len(d["removed_segments"]) == 8
    assert (tmp_path / "T2.svg").read_text().startswith("<?xml")


def test_geometry_bad_level():
    assert main(["geometry", "--level", "-1"]) == 2


def test_orbit_periodic(tmp_path, capsys):
    assert main(["orbit", "--level", "0", "--x0", "2/3", "--slope", "1", "--signs", "++", "--cap", "10000",
                 "--out", str(tmp_path)]) == 0
    assert "periodic" in capsys.readouterr().out
    d = json.loads((tmp_path / "orbit_T0.json").read_text())
    assert d["termination"] == "periodic" and d["period"] == 14


def test_orbit_singular(capsys):
    assert main(["orbit", "--level", "0", "--x0", "0/1", "--slope", "1"]) == 0
    assert "singular" in capsys.readouterr().out


def test_orbit_quadratic_input(capsys):
    assert main(["orbit", "--level", "0", "--x0=-1202+850*sqrt(2)", "--slope", "0/1+1/34*sqrt(2)",
                 "--signs=-+", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["termination"] == "singular" and d["singular_vertex"] == ["1/1", "1/1"]


@pytest.mark.parametrize(
    "argv",
    [
        ["orbit", "--x0", "abc", "--slope", "1"],
        ["orbit", "--x0", "1/3", "--slope", "inf"],
        ["orbit", "--x0", "1/3", "--slope", "0"],
        ["orbit", "--x0", "5", "--slope", "1"],
        ["orbit", "--x0", "1/3", "--slope", "1", "--signs", "+-"],
        ["verify", "unknown"],
        [],
    ],
)
def test_usage_errors(argv):
    assert main(argv) == 2


def test_verify_pass(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "dyadic-lines", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["ok"] and d["suites"][0]["n_checks"] == 20


def test_verify_csv(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["verify", "square-exit", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "suite,case,ok,detail" and len(lines) == 161


def test_verify_failure_exit_code():
    # the reference angle column disagrees with the simulation on the right end segment
    assert main(["verify", "rectangle-exit"]) == 1


def test_path_reports(tmp_path, capsys):
    assert main(["path", "--x0", "1/3", "--slope", "1/3", "--signs", "++", "--levels", "6", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "(-2/5, 3)" in out
    d = json.loads((tmp_path / "path.json").read_text())
    assert d["path"]["address"]["period"] == "LLRR"
    assert (tmp_path / "escape_distances.csv").exists() and (tmp_path / "path.svg").exists()


def test_path_mirror(capsys):
    assert main(["path", "--x0", "1/3", "--slope", "1/3", "--signs=-+", "--levels", "6"]) == 0
    assert "(4/5, 3)" in capsys.readouterr().out


def test_path_infinite_tau(capsys):
    assert main(["path", "--x0", "1/2", "--slope", "1/4", "--levels", "4"]) == 1
    assert "infinite" in capsys.readouterr().out


def test_short_suite_identifiers_resolve():
    from tbilliard.suites import ALIASES, SUITES, canonical_name, suite_names

    assert len(ALIASES) == len(SUITES) and set(ALIASES.values()) == set(SUITES)
    assert all(a in suite_names() and canonical_name(a) in SUITES for a in ALIASES)
    short = next(a for a, c in ALIASES.items() if c == "square-exit")
    assert main(["verify", short]) == 0
