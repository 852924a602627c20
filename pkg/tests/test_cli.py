from __future__ import annotations

import json
import math
from fractions import Fraction
from types import SimpleNamespace

import pytest

from conftest import poly
from vanzone.cli import (
    EXIT_HYPOTHESIS,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_TRUNCATION,
    EXIT_TRUNK,
    PolynomialSyntaxError,
    UnknownVariable,
    main,
    parse_polynomial,
)
from vanzone.pipeline import RunConfig, emit_dot, emit_json, parse_json, report_dict, run_pipeline
from vanzone.probe import estimate_pairs, numeric_probe, snap


# -- parser --------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text,expected",
    [
        ("z^2 - x*y^2", "z^2 - x*y^2"),
        ("z^3 - x^2*y^2", "z^3 - x^2*y^2"),
        ("z^2 - - y", "z^2 + y"),
        ("z**2 - 2x y", "z^2 - 2*x*y"),
        ("(z - y)(z + y)", "z^2 - y^2"),
        ("z^2/3 - x/2", "z^2/3 - x/2"),
        ("-(x + 1)^2 + x^2", "-2*x - 1"),
        ("z^2 − x y^2", "z^2 - x*y^2"),
    ],
)
def test_parse(text, expected):
    assert parse_polynomial(text) == poly(expected)


def test_coefficients_are_exact():
    p = parse_polynomial("x/3")
    assert p.terms[(1, 0, 0, 0)] == Fraction(1, 3)


@pytest.mark.parametrize(
    "text,position,expected",
    [
        ("z^2 +* y", 5, "a number, a variable or '('"),
        ("z^2 - (x", 8, "')'"),
        ("z^ y", 3, "a non-negative integer exponent"),
        ("", 0, "an expression"),
        ("z^2 )", 4, "an operator or end of input"),
        ("z & y", 2, "a number, a variable, an operator or a parenthesis"),
        ("z / y", 2, "division by a nonzero constant"),
    ],
)
def test_parse_errors_report_position_and_expectation(text, position, expected):
    with pytest.raises(PolynomialSyntaxError) as err:
        parse_polynomial(text)
    assert err.value.position == position and err.value.expected == expected


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as err:
        parse_polynomial("z^2 - w")
    assert err.value.position == 6 and err.value.found == "w"


# -- config --------------------------------------------------------------------------------


@pytest.mark.parametrize("kw", [{"truncation": 0}, {"probe_eta": 0.6}, {"probe_alpha": 1.5}])
def test_config_invariants(kw):
    with pytest.raises(ValueError):
        RunConfig(poly("z^2 - x*y^2"), **kw)


# -- reports --------------------------------------------------------------------------------


def test_json_round_trip_and_content():
    res = run_pipeline(RunConfig(parse_polynomial("z^2 - x*y^2"), "z^2 - x*y^2"))
    report = report_dict(res)
    text = emit_json(report)
    assert parse_json(text) == json.loads(text)
    assert emit_json(parse_json(text)) == text
    [run] = report["sigma_branches"]
    assert [b["pair"] for b in run["branches"]] == [["1/2", "-1/2"]]
    assert run["graph"]["q_manifold"] and report["schema_version"] == 1


def test_json_rejects_other_versions():
    with pytest.raises(ValueError):
        parse_json('{"schema_version": 99}')


def test_dot_output():
    report = report_dict(run_pipeline(RunConfig(parse_polynomial("z^2 - x*y^2"))))
    dot = emit_dot(report)
    assert dot.startswith("graph vanishing_zone {")
    assert "shape=square" in dot and "shape=point" in dot and "slope (-1, 2)" in dot and "chi 0" in dot


# -- command line ---------------------------------------------------------------------------


def test_cli_success_writes_outputs(tmp_path, capsys):
    js, dot = tmp_path / "r.json", tmp_path / "g.dot"
    trunk = tmp_path / "trunk.txt"
    trunk.write_text("boundary_tori: 1\n", encoding="utf-8")
    code = main(["-i", "z^2 - x*y^2", "--json", str(js), "--dot", str(dot), "--trunk", str(trunk)])
    assert code == EXIT_OK
    report = parse_json(js.read_text(encoding="utf-8"))
    assert report["sigma_branches"][0]["verdict"]["verdict"] == "s-obstruction"
    assert dot.read_text(encoding="utf-8").startswith("graph")
    assert "Q-manifold" in capsys.readouterr().out


def test_cli_reads_input_files(tmp_path):
    src = tmp_path / "germ.txt"
    src.write_text("z^3 - x*y^2\n", encoding="utf-8")
    assert main(["--input", str(src)]) == EXIT_OK


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_PARSE, EXIT_HYPOTHESIS, EXIT_TRUNCATION, EXIT_INTERNAL, EXIT_TRUNK, 2}) == 7


def test_cli_parse_error(capsys):
    assert main(["-i", "z^2 +* y"]) == EXIT_PARSE
    assert "position 5" in capsys.readouterr().err


def test_cli_hypothesis_violation():
    assert main(["-i", "z^2"]) == EXIT_HYPOTHESIS


def test_cli_bad_trunk(tmp_path):
    trunk = tmp_path / "trunk.txt"
    trunk.write_text("boundary_tori: 3\n", encoding="utf-8")
    assert main(["-i", "z^2 - x*y^2", "--trunk", str(trunk)]) == EXIT_TRUNK
    assert main(["-i", "z^2 - x*y^2", "--trunk", str(tmp_path / "missing")]) == EXIT_TRUNK


def test_cli_truncation_exit(monkeypatch):
    from vanzone import cli
    from vanzone.puiseux import TruncationTooShort

    def short(_cfg):
        raise TruncationTooShort("synthetic")

    monkeypatch.setattr(cli, "run_pipeline", short)
    assert main(["-i", "z^2 - x*y^2"]) == EXIT_TRUNCATION


def test_cli_usage_errors():
    with pytest.raises(SystemExit) as err:
        main(["-i", "z^2 - x*y^2", "--shear", "1,2"])
    assert err.value.code == 2


def test_cli_probe_and_shear(capsys):
    assert main(["-i", "z^2 - x*y^2", "--probe", "--shear", "0,0,0", "--seed", "3"]) == EXIT_OK
    assert "agrees = True" in capsys.readouterr().out


# -- numeric probe ----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "D,q,e",
    [("x*y^2 + t", Fraction(1, 2), Fraction(-1, 2)), ("x*y^3 + t", Fraction(1, 3), Fraction(-1, 3)), ("y - t", 1, 0)],
)
def test_probe_slopes_match_closed_forms(D, q, e):
    [est] = estimate_pairs(poly(D), alpha=0.5, t_values=(1e-5, 1e-6))
    assert abs(est["t_slope"] - q) < 1e-3 and abs(est["x_slope"] - e) < 1e-3
    assert snap(est["t_slope"], 12) == q and snap(est["x_slope"], 12) == e


def test_probe_report_agreement():
    cfg = SimpleNamespace(probe_alpha=0.5, probe_eta=1e-3, denominator_bound=12, seed=0)
    res = run_pipeline(RunConfig(parse_polynomial("z^3 - x^2*y^3")))
    out = numeric_probe(cfg, res.runs[0].disc.D, res.runs[0].expansions)
    assert out["agrees"] and out["max_residual"] < 1e-3 and out["status"] == "ok"


def test_snap():
    assert snap(0.33334, 12) == Fraction(1, 3)
    assert snap(-math.pi, 12) == Fraction(-22, 7)
