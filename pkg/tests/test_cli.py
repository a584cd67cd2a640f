import json
from fractions import Fraction as F

import pytest

from symcoord.cli import main, run
from symcoord.exact_algebra import format_poly, parse_poly


def test_expand_u_text():
    res = run(["expand-u", "--N", "4", "--r", "3"])
    assert res.exit_code == 0
    assert "-1/1 : et[2,1]" in res.payload


def test_expand_u_x_basis_normalized():
    res = run(["expand-u", "--N", "2", "--r", "2", "--basis", "x", "--normalization", "hat"])
    poly = parse_poly(res.payload)
    assert poly.evaluate([F(3), F(1)]) == -1


def test_expand_u_range():
    assert run(["expand-u", "--N", "2", "--r", "3"]).exit_code == 2


@pytest.mark.parametrize("tag", ["paper", "hat", "signed-power", "taylor"])
def test_check_duality(tag):
    res = run(["check-duality", "--N", "3", "--normalization", tag])
    body = json.loads(res.payload)
    assert res.exit_code == 0 and body["pass"]
    assert body["matrix"][1] == ["0/1", "1/1", "0/1"]


def test_round_trip_expand_then_apply(tmp_path):
    path = tmp_path / "u3.txt"
    path.write_text(run(["expand-u", "--N", "4", "--r", "3", "--basis", "x"]).payload)
    res = run(["apply-D", "--N", "4", "--d", "3", "--poly", str(path)])
    assert res.exit_code == 0
    assert parse_poly(res.payload).constant_value() == 1


def test_apply_D_non_symmetric(tmp_path):
    path = tmp_path / "x.txt"
    path.write_text("nvars=2\n1 : 2 0\n")
    res = run(["apply-D", "--N", "2", "--d", "2", "--poly", str(path)])
    assert res.exit_code == 1 and "not symmetric" in res.diagnostics[0]


def test_apply_D_missing_file():
    assert run(["apply-D", "--N", "2", "--d", "1", "--poly", "/nonexistent"]).exit_code == 1


def test_diag_combo_routes():
    outs = [json.loads(run(["diag-combo", "--g", "3", "--route", r]).payload)["terms"]
            for r in ("formula", "bell", "recursion")]
    assert outs[0] == outs[1] == outs[2]
    assert outs[0]["[3]"] == "1/2"
    tsv = run(["diag-combo", "--g", "2", "--format", "tsv"]).payload
    assert tsv.splitlines()[0] == "sigma\tcoefficient"


def test_eval_D_total_diagonal():
    res = run(["eval-D", "--N", "3", "--d", "3", "--point", "1,1,1", "--trace-poly", "0,0,0,1",
               "--normalization", "hat"])
    assert json.loads(res.payload)["value"] == "3/1"


def test_eval_D_generic_float():
    res = run(["eval-D", "--N", "2", "--d", "2", "--point", "0.5,1.5", "--trace-poly", "0,0,1"])
    body = json.loads(res.payload)
    assert body["branch"] == "generic"
    assert body["value"] == pytest.approx(-4.0)


def test_eval_D_needs_function():
    assert run(["eval-D", "--N", "2", "--d", "1", "--point", "1,2"]).exit_code == 2


def test_jacobian_check_and_seed(monkeypatch):
    a = json.loads(run(["jacobian-check", "--N", "3", "--count", "2", "--seed", "4"]).payload)
    assert a["pass"] and a["seed"] == 4
    monkeypatch.setenv("SYMCOORD_SEED", "9")
    b = json.loads(run(["jacobian-check", "--N", "3", "--count", "2", "--seed", "4"]).payload)
    assert b["seed"] == 9
    monkeypatch.setenv("SYMCOORD_SEED", "x")
    assert run(["jacobian-check", "--N", "3"]).exit_code == 2


def test_limit_check():
    res = run(["limit-check", "--N", "3", "--J", "0,1"])
    body = json.loads(res.payload)
    assert res.exit_code == 0 and body["pass"]
    assert run(["limit-check", "--N", "3", "--J", "5"]).exit_code == 2


def test_decay_table_report():
    res = run(["decay-table", "--rmax", "3"])
    assert res.status == "report" and res.exit_code == 0
    assert len(res.payload.splitlines()) == 7
    assert run(["decay-table", "--rmax", "9"]).exit_code == 2


def test_derivative_constant():
    assert run(["derivative-constant", "--r", "2", "--sigma", "[1,1]"]).payload == "[1] / [0, 0, -1, 1]\n"
    body = json.loads(run(["derivative-constant", "--r", "2", "--sigma", "[2]", "--format", "json"]).payload)
    assert body["decay_order"] == 2
    assert run(["derivative-constant", "--r", "3", "--sigma", "[1,1]"]).exit_code == 2


def test_usage_errors():
    assert run(["bogus"]).exit_code == 2
    assert run([]).exit_code == 2
    assert run(["check-duality", "--N", "2", "--jobs", "0"]).exit_code == 2


def test_main_prints(capsys):
    assert main(["diag-combo", "--g", "1"]) == 0
    assert '"[1]": "1/1"' in capsys.readouterr().out
