import json
from fractions import Fraction

import pytest
from pydantic import ValidationError
from typer.testing import CliRunner

from midconvex.cli.app import app
from midconvex.cli.theme import Palette

runner = CliRunner()


def run(*args: str):
    return runner.invoke(app, list(args))


def run_json(*args: str):
    result = run("--output", "json", *args)
    return result, json.loads(result.stdout) if result.exit_code in (0, 1) else None


def test_orbit_lambda():
    result, data = run_json("orbit", "--lambda", "1/5")
    assert result.exit_code == 0
    assert data["cycle"] == ["1/5", "2/5"]
    assert data["period"] == 2
    assert data["ell"] == 2
    assert data["order_of_2"] == 4
    assert data["cross_check"] == "ok"


def test_orbit_power_of_two_denominator():
    result, data = run_json("orbit", "--lambda", "1/4")
    assert result.exit_code == 0
    assert data["preperiod"] == ["1/4", "1/2"]
    assert data["cycle"] == ["0"]


def test_orbit_mu():
    result, data = run_json("orbit", "--n", "9", "--m", "1")
    assert result.exit_code == 0
    assert data["states"] == [1, 2, 4]
    assert data["period"] == 3
    assert data["euler"] == "DividesPlus"


@pytest.mark.parametrize("args", [
    ["orbit"],
    ["orbit", "--lambda", "abc"],
    ["orbit", "--lambda", "3/2"],
    ["orbit", "--n", "8", "--m", "1"],
    ["orbit", "--n", "9", "--m", "3"],
    ["orbit", "--lambda", "1/3", "--n", "9"],
])
def test_orbit_usage_errors(args):
    assert run(*args).exit_code == 2


def test_orbit_text():
    result = run("orbit", "--lambda", "1/6")
    assert result.exit_code == 0
    assert "1/3" in result.stdout


@pytest.mark.parametrize("lam, terms", [
    ("1/6", [["1", "1/6"], ["1", "1/3"]]),
    ("1/2", [["1", "1/2"]]),
    ("2/3", [["2", "1/3"]]),
    ("3/5", [["4/3", "2/5"], ["2/3", "1/5"]]),
    ("3/4", [["1", "1/4"], ["1/2", "1/2"]]),
    ("1/5", [["4/3", "1/5"], ["2/3", "2/5"]]),
    ("0", []),
])
def test_closed_form(lam, terms):
    result, data = run_json("closed-form", "--lambda", lam)
    assert result.exit_code == 0
    assert data["terms"] == terms


def test_closed_form_csv_keep_zero():
    result = run("--output", "csv", "closed-form", "--lambda", "1/4", "--keep-zero")
    assert result.exit_code == 0
    assert result.stdout == "weight,scale\n1,1/4\n1/2,1/2\n1/2,0\n"


def test_dz():
    result, data = run_json("dz", "--x=-13/5", "--count", "3")
    assert result.exit_code == 0
    assert data["dz"] == "2/5"
    assert data["double_identity"] is True
    assert data["orbit"] == ["2/5", "1/5", "2/5"]


def test_bound_quadratic_one_third():
    result, data = run_json("bound", "--lambda", "1/3", "--u", "1", "--phi", "quad:1")
    assert result.exit_code == 0
    values = {e["rule"]: e["value"] for e in data["estimates"]}
    for rule in ("RationalNK", "TakagiClosedForm", "Composition", "IntroSpecialCase"):
        assert values[rule] == "2/9"
    assert Fraction(values["TakagiTruncated"]) >= Fraction(2, 9)
    assert data["estimates"][data["best"]]["value"] == "2/9"
    assert data["lambda"] == "1/3"
    assert data["phi"] == "quad:1"


def test_bound_takagi_beats_rational_nk():
    result, data = run_json("bound", "--lambda", "1/4", "--u", "1", "--phi", "pow:1,1")
    assert result.exit_code == 0
    values = {e["rule"]: e["value"] for e in data["estimates"]}
    assert values["RationalNK"] == "3/4"
    assert values["TakagiClosedForm"] == "1/2"
    assert data["estimates"][data["best"]]["value"] == "1/2"


def test_bound_zero_lambda():
    result, data = run_json("bound", "--lambda", "0", "--u", "5", "--phi", "quad:1")
    assert result.exit_code == 0
    assert all(Fraction(str(e["value"])) == 0 for e in data["estimates"])


def test_bound_extra_factor():
    result, data = run_json("bound", "--lambda", "1/6", "--u", "1", "--phi", "pow:1,1", "--factor", "1/2,1/3")
    assert result.exit_code == 0
    assert sum(1 for e in data["estimates"] if e["rule"] == "Composition") == 2


def test_bound_unbounded_regularization():
    assert run("bound", "--lambda", "1/3", "--u", "1", "--phi", "pow:-1,1").exit_code == 3


@pytest.mark.parametrize("args", [
    ["bound", "--lambda", "1/3", "--u", "1", "--phi", "cubic:1"],
    ["bound", "--lambda", "5/3", "--u", "1", "--phi", "quad:1"],
    ["bound", "--lambda", "0.5.1", "--u", "1", "--phi", "quad:1"],
    ["bound", "--lambda", "1/6", "--u", "1", "--phi", "quad:1", "--factor", "1/2,1/2"],
])
def test_bound_usage_errors(args):
    assert run(*args).exit_code == 2


def test_bound_csv():
    result = run("--output", "csv", "bound", "--lambda", "1/2", "--u", "2", "--phi", "quad:1")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "rule,value,certified,best,detail"
    assert lines[1].startswith("RationalNK,1,True,True")


def test_identity_text():
    result = run("identity", "--denominator-max", "6")
    assert result.exit_code == 0
    assert "all 11 reduced fractions in (0, 1) pass" in result.stdout


@pytest.mark.parametrize("denominator_max, checked", [(2, 1), (3, 3), (6, 11)])
def test_identity_counts_interior_fractions(denominator_max, checked):
    result, data = run_json("identity", "--denominator-max", str(denominator_max))
    assert result.exit_code == 0
    assert data["checked"] == checked


def test_identity_with_random_sweep():
    result, data = run_json("--seed", "7", "identity", "--denominator-max", "30", "--random", "25")
    assert result.exit_code == 0
    assert data["passed"] is True
    assert data["seed"] == 7
    assert data["failures"] == []


def test_identity_rejects_small_bound():
    assert run("identity", "--denominator-max", "1").exit_code == 2


def test_fixed_point_quadratic():
    result, data = run_json("fixed-point", "--psi", "pow:1,2", "--grid-exp", "10", "--iters", "40")
    assert result.exit_code == 0
    assert data["residual"] <= 1e-9
    assert len(data["values"]) == 1025
    for lam, value in data["values"][::64]:
        lam = Fraction(lam)
        assert value == pytest.approx(float(lam * (1 - lam)), abs=1e-9)


def test_fixed_point_zero_csv():
    result = run("--output", "csv", "fixed-point", "--psi", "zero", "--grid-exp", "3", "--iters", "5")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "lambda,value,residual"
    assert len(lines) == 10
    assert all(line.split(",")[1] == "0.0" for line in lines[1:])


def test_fixed_point_linear_at_half():
    result, data = run_json("fixed-point", "--psi", "pow:1,1", "--grid-exp", "8", "--iters", "40")
    assert result.exit_code == 0
    values = dict((lam, value) for lam, value in data["values"])
    assert values["1/2"] == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("args", [
    ["fixed-point", "--psi", "pow:1,2", "--grid-exp", "0"],
    ["fixed-point", "--psi", "pow:1,2", "--iters", "-1"],
    ["fixed-point", "--psi", "nope"],
])
def test_fixed_point_usage_errors(args):
    assert run(*args).exit_code == 2


def test_check_quadratic_tightness():
    result, data = run_json(
        "check", "--f", "negquad:1", "--phi", "quad:1", "--domain=-1,1",
        "--grid", "50", "--lambda-den-max", "12", "--pairs", "6",
    )
    assert result.exit_code == 0
    assert data["passed"] is True
    assert data["midpoint_violations"] == []
    for row in data["profile"]:
        assert row["gap"] == row["bound"]
        lam = Fraction(row["lambda"])
        assert Fraction(row["gap"]) == lam * (1 - lam) * 4


def test_check_convex_passes():
    result = run("check", "--f", "quad:1,0,0", "--phi", "zero", "--domain", "0,1", "--grid", "20", "--pairs", "6")
    assert result.exit_code == 0


def test_check_reports_violations():
    result = run(
        "--output", "csv", "check", "--f", "negquad:1", "--phi", "zero", "--domain", "0,1",
        "--grid", "5", "--lambda-den-max", "4", "--pairs", "4",
    )
    assert result.exit_code == 1
    lines = result.stdout.splitlines()
    assert "section,lambda,num,den,x,y,gap,bound,rule,holds" in lines
    assert any(line.startswith("midpoint,1/2,1,2,0,1,") for line in lines)
    assert any(line.startswith("profile,1/2,1,2,0,1,1/4,0,") for line in lines)


@pytest.mark.parametrize("args", [
    ["check", "--f", "quad:1,0,0", "--phi", "zero", "--domain", "1,0"],
    ["check", "--f", "cosh", "--phi", "zero"],
    ["check", "--f", "abs", "--phi", "zero", "--grid", "1"],
])
def test_check_usage_errors(args):
    assert run(*args).exit_code == 2


def test_check_unbounded():
    assert run("check", "--f", "abs", "--phi", "pow:-1,1", "--grid", "5", "--pairs", "3").exit_code == 3


def test_output_is_deterministic():
    args = ["--output", "json", "bound", "--lambda", "3/7", "--u", "2/3", "--phi", "pow:1,3/2"]
    assert run(*args).stdout == run(*args).stdout


def test_theme_option():
    assert run("--theme", "nord", "identity", "--denominator-max", "3").exit_code == 0
    assert run("--theme", "plain", "identity", "--denominator-max", "3").exit_code == 0
    assert run("--theme", "solarized", "identity").exit_code == 2


def test_palette_colors():
    assert Palette(label="88c0d0").label == "#88c0d0"
    assert Palette(label="default").label == "default"
    with pytest.raises(ValidationError):
        Palette(frame="#12")
    with pytest.raises(ValidationError):
        Palette(frame="#zzzzzz")
