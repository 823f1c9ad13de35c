"""Command line entry points, JSON reports, and exit codes."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

import robustnp
from robustnp.cli import (
    EXIT_CERTIFICATE,
    EXIT_INPUT,
    EXIT_MISMATCH,
    EXIT_OK,
    load_problem,
    main,
    parse_problem,
    serialize_problem,
)

F = Fraction

FIXTURES = Path(robustnp.__file__).parent / "fixtures"


def run(argv):
    return main([str(a) for a in argv])


def write_spec(tmp_path, payload, name="prob.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


SMALL = {
    "atoms": ["a", "b"],
    "has_tail": False,
    "alpha": "1/2",
    "p_family": [{"a": "1/2", "b": "1/2"}],
    "q_family": [{"b": "1"}],
}


def test_solve_three_atom_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run(["solve", FIXTURES / "three_atom.json", "--json", out]) == EXIT_OK
    text = capsys.readouterr().out
    assert "value: 1 (1.0)" in text
    report = json.loads(out.read_text())
    assert report["value"] == {"exact": "1", "decimal": "1.0"}
    assert report["case"] == "LevelAttained"
    assert report["attained_level"]["exact"] == "1/2"
    assert {a: v["exact"] for a, v in report["test"].items()} == {
        "w1": "1",
        "w2": "1",
        "w3": "0",
    }
    assert report["lambda"]["exact"] == "1"
    assert report["beta"]["exact"] == "1/2"
    assert report["beta_criterion_matches_case"] is True
    assert report["representation"]["form"] == "threshold"
    assert report["representation"]["verdict"] is True
    assert report["certificate"] == {
        "status": "verified",
        "duality_gap": {"exact": "0", "decimal": "0.0"},
    }


def test_solve_dirac_degenerate(tmp_path):
    out = tmp_path / "report.json"
    assert run(["solve", FIXTURES / "dirac.json", "--json", out]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["case"] == "LevelSlack"
    assert report["attained_level"]["exact"] == "0"
    rep = report["representation"]
    assert rep["form"] == "degenerate"
    assert rep["verdict"] is True
    assert len(rep["checks"]) >= 3
    assert all(c["verdict"] and c["gamma_consistent"] for c in rep["checks"])


def test_solve_with_oracle_agrees(tmp_path):
    out = tmp_path / "report.json"
    code = run(["solve", FIXTURES / "three_atom.json", "--oracle", "--json", out])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["oracle"]["matches"] is True
    assert report["oracle"]["value"]["exact"] == "1"


def test_alpha_override(tmp_path):
    out = tmp_path / "report.json"
    assert run(["solve", FIXTURES / "dirac.json", "--alpha", "9/10", "--json", out]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["problem"]["alpha"]["exact"] == "9/10"
    for bad in ("0", "1", "3/2"):
        assert run(["solve", FIXTURES / "dirac.json", "--alpha", bad]) == EXIT_INPUT
    assert run(["solve", FIXTURES / "dirac.json", "--alpha=-1/4"]) == EXIT_INPUT


def test_json_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    spec = write_spec(tmp_path, SMALL)
    assert run(["solve", spec, "--json", a]) == EXIT_OK
    assert run(["solve", spec, "--json", b]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().endswith("\n")


def test_round_trip_serialization(tmp_path):
    prob = load_problem(str(FIXTURES / "intro_example.json"))
    payload = serialize_problem(prob)
    again = parse_problem(payload)
    assert again == prob
    # Zero masses are dropped on the way out.
    assert "w3" not in serialize_problem(load_problem(str(FIXTURES / "three_atom.json")))["q_family"][1]


def test_input_errors(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert run(["solve", missing]) == EXIT_INPUT
    capsys.readouterr()

    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    assert run(["solve", bad_json]) == EXIT_INPUT
    assert "line 1" in capsys.readouterr().err

    float_mass = dict(SMALL, p_family=[{"a": 0.5, "b": "1/2"}])
    assert run(["solve", write_spec(tmp_path, float_mass, "f.json")]) == EXIT_INPUT
    assert "floats are not exact" in capsys.readouterr().err

    short = dict(SMALL, p_family=[{"a": "1/3"}])
    assert run(["solve", write_spec(tmp_path, short, "s.json")]) == EXIT_INPUT
    err = capsys.readouterr().err
    assert "sum to 1/3" in err

    unknown = dict(SMALL, q_family=[{"zz": "1"}])
    assert run(["solve", write_spec(tmp_path, unknown, "u.json")]) == EXIT_INPUT
    assert "zz" in capsys.readouterr().err

    no_alpha = {k: v for k, v in SMALL.items() if k != "alpha"}
    assert run(["solve", write_spec(tmp_path, no_alpha, "n.json")]) == EXIT_INPUT
    assert "alpha" in capsys.readouterr().err

    empty_family = dict(SMALL, q_family=[])
    assert run(["solve", write_spec(tmp_path, empty_family, "e.json")]) == EXIT_INPUT
    capsys.readouterr()


def test_np_command(tmp_path, capsys):
    out = tmp_path / "np.json"
    spec = write_spec(tmp_path, SMALL)
    assert run(["np", spec, "--oracle", "--json", out]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["power"]["exact"] == "1"
    assert report["oracle"]["matches"] is True
    capsys.readouterr()

    two_members = dict(SMALL, q_family=[{"b": "1"}, {"a": "1"}])
    assert run(["np", write_spec(tmp_path, two_members, "t.json")]) == EXIT_INPUT
    assert "exactly one" in capsys.readouterr().err


def test_sweep_command(tmp_path, capsys):
    out = tmp_path / "sweep.json"
    assert run(["sweep", "nonexistence", "--sizes", "1:4", "--json", out]) == EXIT_OK
    report = json.loads(out.read_text())
    values = [row["value"]["exact"] for row in report["rows"]]
    assert values == ["3/4", "7/8", "15/16", "31/32"]
    capsys.readouterr()

    assert run(["sweep", "nonexistence", "--sizes", "2,5,9", "--alpha", "1/4"]) == EXIT_OK
    text = capsys.readouterr().out
    assert "13/16" in text

    assert run(["sweep", "nonexistence", "--sizes", "0:2"]) == EXIT_INPUT
    capsys.readouterr()
    assert run(["sweep", "nonexistence", "--sizes", "3:1"]) == EXIT_INPUT
    capsys.readouterr()
    assert run(["sweep", "unknown_family", "--sizes", "1:2"]) == EXIT_INPUT
    assert "unknown_family" in capsys.readouterr().err


def test_check_command(tmp_path, capsys):
    spec = write_spec(tmp_path, SMALL)
    out = tmp_path / "check.json"
    assert run(["check", spec, "--json", out]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["h1"] is True
    assert report["h3"] is True
    assert report["h2_at"] == {"constant_1/2": True, "ones": True}
    assert report["witnesses"] == {}
    capsys.readouterr()


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_INPUT, EXIT_CERTIFICATE, EXIT_MISMATCH}) == 4
    assert EXIT_OK == 0


def test_bundled_fixtures_match_repo_copies():
    repo = Path(__file__).resolve().parent.parent / "fixtures"
    names = sorted(p.name for p in FIXTURES.glob("*.json"))
    assert names == sorted(p.name for p in repo.glob("*.json"))
    assert names
    for name in names:
        assert (FIXTURES / name).read_bytes() == (repo / name).read_bytes()


def test_every_fixture_solves(tmp_path):
    for path in sorted(FIXTURES.glob("*.json")):
        out = tmp_path / (path.stem + ".json")
        assert run(["solve", path, "--json", out]) == EXIT_OK, path.name
        report = json.loads(out.read_text())
        assert report["certificate"]["status"] == "verified"
        assert report["certificate"]["duality_gap"]["exact"] == "0"
