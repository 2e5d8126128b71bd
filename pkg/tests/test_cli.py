import json
import random
import subprocess
import sys

import pytest

from skewps import Zp
from skewps.cli import main
from skewps.samples import iso_context
from skewps.serialize import dumps


Z = ["--ring", "Zp(2,8)"]
DPI = ["--ring", "FqSeries(4,8)", "--twist", '{"delta":[{"dpi":true}]}']


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def ctx_file(tmp_path):
    ctx = iso_context(Zp(2, 8), random.Random(0))
    p = tmp_path / "ctx.json"
    p.write_text(dumps(ctx.to_json()))
    return str(p)


def test_eval_series_product(capsys):
    out = run_json(capsys, "eval", *Z, "--let", 'f={"coeffs":[1,1]}', "f*f")
    assert out["kind"] == "series"
    assert [c if isinstance(c, int) else c["value"] for c in out["value"]["coeffs"][:3]] == [1, 2, 1]
    assert out["session"]["validated"]["compatible"]["passed"]


def test_eval_val(capsys):
    out = run_json(capsys, "eval", *Z, "val(x + 2)")
    assert out["value"] == {"exact": True, "value": 1}


def test_eval_inputs_file(capsys, tmp_path):
    p = tmp_path / "in.json"
    p.write_text(json.dumps({"ring": "Zp(2,8)", "inputs": {"a": 6, "g": {"coeffs": [2, 1]}}}))
    out = run_json(capsys, "eval", "--in", "@" + str(p), "a * g")
    assert out["value"]["coeffs"][0] == 12


def test_eval_parse_error_exit_2(capsys):
    code, out, err = run(capsys, "eval", *Z, "x +* 2")
    assert code == 2 and out == ""
    assert err.startswith("ParseError:") and "position" in err


def test_eval_bad_literal_exit_2(capsys):
    code, _, err = run(capsys, "eval", *Z, "--let", 'f={"coeffs":[1,', "f")
    assert code == 2 and "ParseError" in err


def test_incompatible_context_exit_1(capsys):
    code, _, err = run(capsys, "eval", *DPI, "x")
    assert code == 1 and "HypothesisViolated" in err


def test_unchecked_overrides_gate(capsys):
    out = run_json(capsys, "eval", *DPI, "--unchecked", "x")
    assert out["session"]["unchecked"] is True


def test_check_list_and_run(capsys):
    out = run_json(capsys, "check", "--list")
    assert "theorem-a" in out["suites"] and "prop3.4-counterexample" in out["suites"]
    out = run_json(capsys, "check", "lemma-beta", "--trials", "3", "--seed", "2")
    assert out["passed"] and out["reproduce"] == "skewps check lemma-beta --trials 3 --seed 2"


def test_check_unknown_suite_exit_2(capsys):
    code, _, err = run(capsys, "check", "nope")
    assert code == 2 and "UnknownSuite" in err


def test_check_out_file(capsys, tmp_path):
    p = tmp_path / "rep.json"
    code, out, _ = run(capsys, "check", "compat-gate", "--out", str(p))
    assert code == 0
    assert json.loads(p.read_text())["passed"]


def test_reparam_round_trip(capsys):
    out = run_json(capsys, "reparam", "scale", *Z, "--a", "3", "--in", '{"coeffs":[0,1]}')
    assert out["report"]["read_off"]["passed"]
    out = run_json(capsys, "reparam", "shift", *Z, "--t", "2", "--in", '{"coeffs":[0,0,1]}')
    assert [c if isinstance(c, int) else c["value"] for c in out["series"]["coeffs"][:3]] == \
        [4, 4, 1]


def test_reparam_refuses_unit_shift(capsys):
    code, _, err = run(capsys, "reparam", "shift", *Z, "--t", "1", "--in", '{"coeffs":[0,1]}')
    assert code == 1 and "HypothesisViolated" in err


def test_untwist_and_iso_round_trip(capsys, ctx_file):
    out = run_json(capsys, "untwist", "--context", "@" + ctx_file)
    assert all(st["passed"] for st in out["iso"]["chain"])
    series = '{"coeffs":[[[1,2],[3,4]],[[0,1],[1,0]]]}'
    fwd = run_json(capsys, "iso", "apply", "--context", "@" + ctx_file, "--series", series)
    back = run_json(capsys, "iso", "unapply", "--context", "@" + ctx_file,
                    "--series", json.dumps(fwd["result"]))
    coeffs = back["result"]["coeffs"]
    assert coeffs[0] == [[1, 2], [3, 4]]
    assert coeffs[1]["value"] == [[0, 1], [1, 0]]


def test_weierstrass_prepare(capsys):
    for schedule in ("remainder", "residual"):
        out = run_json(capsys, "weierstrass", "prepare", *Z, "--series", '{"coeffs":[4,4]}',
                       "--schedule", schedule)
        prep = out["prepared"]
        assert prep["m"] == 2 and prep["d"] == 0 and prep["residual_zero"]


def test_ideal_poly_right_and_two_sided(capsys, ctx_file):
    out = run_json(capsys, "ideal", "poly", *Z, "--generator", '{"coeffs":[2,1,3]}')
    assert out["kind"] == "right" and out["witness"]["verified"]
    assert out["witness"]["degree"] == 1
    out = run_json(capsys, "ideal", "poly", "--context", "@" + ctx_file,
                   "--generator", '{"coeffs":[[[2,0],[0,2]]]}')
    assert out["witness"]["verified"]


def test_argparse_error_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check", "--bogus"])
    assert info.value.code == 2
    capsys.readouterr()


def _sub(*argv):
    return subprocess.run([sys.executable, "-m", "skewps", *argv], capture_output=True,
                          text=True, timeout=120)


def test_subprocess_exit_codes_and_determinism():
    a = _sub("check", "weierstrass", "--trials", "5", "--seed", "4")
    b = _sub("check", "weierstrass", "--trials", "5", "--seed", "4")
    assert a.returncode == 0 and a.stdout == b.stdout
    assert _sub("eval", *Z, "x +* 2").returncode == 2
    assert _sub("eval", *DPI, "x").returncode == 1
    assert _sub("check", "--bogus").returncode == 2
