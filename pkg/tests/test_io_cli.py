"""Instance/report formats, the generator and the command line."""
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from helpers import DATA
from hypothesis import given, settings
from hypothesis import strategies as st

from kinets.cli import main
from kinets.errors import ParseError, ResampleLimit, SpecInvalid
from kinets.geometry import static_general_position
from kinets.io import (
    POLYNOMIAL,
    RATIONAL,
    STATIC,
    GenSpec,
    InstanceFile,
    ReportFile,
    gen_instance,
    instance_from_json,
    instance_from_points,
    jsonable,
    loads_instance,
    report_from_json,
)
from kinets.kinetic import check_identical
from kinets.poly import Poly, RationalFunction
from kinets.weaknet import kinetic_general_position

FIG1 = str(DATA / "figure1.json")


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# --- formats

coef = st.lists(st.integers(-10 ** 30, 10 ** 30), min_size=1, max_size=4)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(coef, coef), min_size=1, max_size=5), st.integers(1, 2))
def test_instance_round_trip(rows, d):
    pts = []
    for k, (num, den) in enumerate(rows):
        if not any(den):
            den = [1]
        f = RationalFunction(Poly(num), Poly(den))
        pts.append((f"q{k}", [f] * d))
    inst = InstanceFile(d, RATIONAL, pts, provenance={"seed": 3})
    back = loads_instance(inst.dumps())
    assert back.points == inst.points
    assert back.d == d and back.mode == RATIONAL and back.beta == inst.beta
    assert back.dumps() == inst.dumps()


def test_numbers_are_strings():
    inst = instance_from_points([(Fraction(1, 3), 2), (5, -7)])
    text = inst.dumps()
    data = json.loads(text)
    assert data["points"][0]["coords"][0] == {"num": ["1"], "den": ["3"]}
    assert data["d"] == "2"
    assert jsonable({"a": Fraction(-3, 4), "b": {2, 1}, "c": (True, None)}) == {
        "a": "-3/4", "b": ["1", "2"], "c": [True, None]
    }


def test_report_round_trip():
    rep = ReportFile("select", {"seed": 1}, {"x": [Fraction(1, 2)]}, {"n": 4}, {"ok": True, "other": False})
    assert not rep.passed
    back = report_from_json(json.loads(rep.dumps()))
    assert back.dumps() == rep.dumps()


@pytest.mark.parametrize("text, where", [
    ('{"d": "1", "mode": "STATIC", "points": [{"id": "a", "coords": [{"num": ["x"]}]}]}',
     "points[0].coords[0].num[0]"),
    ('{"d": "2", "mode": "STATIC", "points": [{"id": "a", "coords": [{"num": ["1"]}]}]}',
     "points[0].coords"),
    ('{"d": "1", "mode": "POLYNOMIAL", "points": [{"id": "a", "coords": [{"num": ["1"], "den": ["1", "1"]}]}]}',
     "points[0].coords[0].den"),
    ('{"d": "1", "mode": "STATIC", "points": [{"id": "a", "coords": [{"num": ["1", "2"]}]}]}',
     "points[0].coords[0]"),
    ('{"d": "1", "mode": "STATIC", "points": [{"id": "a", "coords": [{"num": ["1"], "den": ["0"]}]}]}',
     "points[0].coords[0].den"),
    ('{"d": 1, "mode": "STATIC", "points": []}', "d"),
    ('{"d": "1", "mode": "CURVED", "points": []}', "mode"),
])
def test_parse_errors_carry_positions(text, where):
    with pytest.raises(ParseError) as err:
        loads_instance(text)
    assert err.value.details["at"] == where
    assert where in str(err.value)


def test_json_syntax_error_position():
    with pytest.raises(ParseError) as err:
        loads_instance('{\n  "d": "1",\n  "mode" "STATIC"\n}')
    assert err.value.details["line"] == 3


def test_duplicate_ids_rejected():
    with pytest.raises(ParseError):
        instance_from_json({"d": "1", "mode": "STATIC", "points": [
            {"id": "a", "coords": [{"num": ["1"]}]}, {"id": "a", "coords": [{"num": ["2"]}]}]})


# --- generator

def test_gen_examples():
    inst = gen_instance(GenSpec(2, 4, STATIC, 0, 1))
    assert len(inst.points) == 4 and static_general_position(inst.point_set())
    inst = gen_instance(GenSpec(1, 4, POLYNOMIAL, 1, 7))
    M = inst.moving_1d()
    check_identical(M)
    assert M.beta == 1
    inst = gen_instance(GenSpec(2, 8, POLYNOMIAL, 1, 2))
    assert kinetic_general_position(inst.moving_2d())[0]
    assert gen_instance(GenSpec(2, 6, STATIC, 0, 5)).dumps() == gen_instance(GenSpec(2, 6, STATIC, 0, 5)).dumps()
    assert gen_instance(GenSpec(2, 6, STATIC, 0, 5)).dumps() != gen_instance(GenSpec(2, 6, STATIC, 0, 6)).dumps()


def test_gen_rational_has_denominators():
    inst = gen_instance(GenSpec(1, 5, RATIONAL, 2, 4))
    assert inst.mode == RATIONAL
    assert any(not f.is_polynomial() for _, fs in inst.points for f in fs)


@pytest.mark.parametrize("spec", [
    GenSpec(2, 4, "CURVED"),
    GenSpec(0, 4),
    GenSpec(2, 0),
    GenSpec(2, 4, STATIC, 1),
    GenSpec(2, 4, POLYNOMIAL, 0),
    GenSpec(3, 4, POLYNOMIAL, 1),
    GenSpec(2, 4, RATIONAL, 1),
])
def test_gen_invalid_specs(spec):
    with pytest.raises(SpecInvalid):
        gen_instance(spec)


def test_gen_resample_limit():
    # 30 points with coordinates in [-1, 1] cannot avoid three collinear
    with pytest.raises(ResampleLimit):
        gen_instance(GenSpec(2, 30, STATIC, 0, 1, spread=1), tries=5)


# --- command line

def test_cli_kih_enum_figure1(tmp_path, capsys):
    out = tmp_path / "enum.json"
    code, _, _ = run(["kih", "enum", "--input", FIG1, "--out", str(out)], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["metrics"]["count"] == "13"
    assert rep["outputs"]["missing"] == [["p1", "p4"], ["p1", "p2", "p4"], ["p1", "p3", "p4"]]
    assert [e["time"] for e in rep["outputs"]["events"]] == [{"exact": "0"}, {"exact": "1/2"}]
    assert (tmp_path / "enum.svg").exists()


def test_cli_kih_net_and_vc(tmp_path, capsys):
    code, text, _ = run(["kih", "net", "--input", FIG1, "--r", "2"], capsys)
    assert code == 0
    assert json.loads(text)["outputs"]["net"] == ["p2"]
    code, text, _ = run(["kih", "vc", "--input", FIG1], capsys)
    rep = json.loads(text)
    assert code == 0
    assert rep["outputs"]["vc_dimension"] == "3"
    assert rep["outputs"]["shatter"] == {"1": "2", "2": "4", "3": "8", "4": "13"}


def test_cli_gen_select_byte_identical(tmp_path, capsys):
    inst = tmp_path / "pts.json"
    assert run(["gen", "--d", "2", "--n", "8", "--seed", "4", "--out", str(inst)], capsys)[0] == 0
    first = inst.read_bytes()
    assert run(["gen", "--d", "2", "--n", "8", "--seed", "4", "--out", str(inst)], capsys)[0] == 0
    assert inst.read_bytes() == first
    rep = tmp_path / "sel.json"
    assert run(["select", "--input", str(inst), "--out", str(rep)], capsys)[0] == 0
    a, svg = rep.read_bytes(), (tmp_path / "sel.svg").read_bytes()
    assert run(["select", "--input", str(inst), "--out", str(rep)], capsys)[0] == 0
    assert rep.read_bytes() == a
    assert (tmp_path / "sel.svg").read_bytes() == svg
    verdicts = json.loads(a)["verdicts"]
    assert verdicts == {"depth_meets_bound": True, "oracle_depth_agrees": True}


def test_cli_richsimplex(tmp_path, capsys):
    inst = tmp_path / "pts.json"
    run(["gen", "--d", "2", "--n", "8", "--seed", "2", "--out", str(inst)], capsys)
    code, text, _ = run(["richsimplex", "--input", str(inst), "--no-figure"], capsys)
    assert code == 0
    assert json.loads(text)["verdicts"]["count_meets_bound"]


def test_cli_knet_build_verify_and_failure(tmp_path, capsys):
    inst = tmp_path / "mov.json"
    run(["gen", "--d", "2", "--n", "12", "--mode", "POLYNOMIAL", "--beta", "1", "--seed", "3", "--out", str(inst)],
        capsys)
    net = tmp_path / "net.json"
    code, _, _ = run(["knet", "build", "--input", str(inst), "--r", "2", "--force-construct", "--samples", "4",
                      "--subsets", "10", "--out", str(net)], capsys)
    assert code == 0
    rep = json.loads(net.read_text())
    assert rep["metrics"]["fallback"] is False
    code, _, _ = run(["knet", "verify", "--input", str(inst), "--net", str(net), "--subsets", "10", "--no-figure"],
                     capsys)
    assert code == 0
    # a net without lines must fail verification: exit status 1
    rep["outputs"]["net"]["lines"] = []
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(rep))
    code, text, err = run(["knet", "verify", "--input", str(inst), "--net", str(broken), "--subsets", "10",
                           "--no-figure"], capsys)
    assert code == 1
    assert "weak_net_verified" in err
    assert json.loads(text)["failures"]


def test_cli_knet_rejects_forged_height(tmp_path, capsys):
    inst = tmp_path / "mov.json"
    run(["gen", "--d", "2", "--n", "10", "--seed", "1", "--out", str(inst)], capsys)
    net = tmp_path / "net.json"
    run(["knet", "build", "--input", str(inst), "--force-construct", "--samples", "2", "--subsets", "5",
         "--no-figure", "--out", str(net)], capsys)
    rep = json.loads(net.read_text())
    rep["outputs"]["net"]["lines"][0]["height_net"][0]["num"] = ["12345"]
    net.write_text(json.dumps(rep))
    code, _, err = run(["knet", "verify", "--input", str(inst), "--net", str(net), "--no-figure"], capsys)
    assert code == 2 and "not the chord height" in err


def test_cli_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"d": "1", "mode": "STATIC", "points": [{"id": "a", "coords": [{"num": ["x"]}]}]}')
    code, _, err = run(["kih", "enum", "--input", str(bad)], capsys)
    assert code == 2 and "points[0].coords[0].num[0]" in err
    code, _, err = run(["kih", "enum", "--input", str(tmp_path / "missing.json")], capsys)
    assert code == 2 and "error IO" in err
    # a static command on a moving instance
    code, _, err = run(["select", "--input", FIG1], capsys)
    assert code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "kinets", "kih", "vc", "--input", FIG1],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"] is True
