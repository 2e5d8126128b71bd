import pytest

from skewps import NotAUnit, UnknownSuite
from skewps.checks import SUITES, _Tally, run_suite
from skewps.serialize import dumps


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes_small(name):
    rep = run_suite(name, trials=3, seed=1)
    assert rep.passed, rep.witness
    assert rep.failures == 0 and rep.witness is None
    assert rep.suite == name


@pytest.mark.parametrize("name", ["assoc", "prop3.4", "weierstrass", "ideal-poly"])
def test_reports_are_byte_identical(name):
    a = dumps(run_suite(name, trials=4, seed=7))
    b = dumps(run_suite(name, trials=4, seed=7))
    assert a == b


def test_seed_changes_samples():
    a = run_suite("compat-gate", seed=1).details["rejection"]["witness"]
    b = run_suite("compat-gate", seed=2).details["rejection"]["witness"]
    assert a["r"] != b["r"]


def test_reproduce_line():
    rep = run_suite("matrix-val", trials=5, seed=3)
    assert rep.reproduce == "skewps check matrix-val --trials 5 --seed 3"
    assert rep.to_json()["reproduce"] == rep.reproduce


def test_default_trials():
    assert run_suite("prop3.4-counterexample").trials == SUITES["prop3.4-counterexample"][1]


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("no-such-suite")


def test_tally_keeps_first_witness_and_counts_errors():
    t = _Tally("demo", 3, 0)
    t.record(True)
    t.record(False, lambda: {"first": 1})
    t.record(False, {"second": 2})

    def boom():
        raise NotAUnit("2 is not a unit")

    t.run("k=3", boom)
    rep = t.done()
    assert not rep.passed and rep.failures == 3
    assert rep.witness == {"first": 1}
    t2 = _Tally("demo", 1, 0)
    t2.run("k=0", boom)
    assert t2.done().witness["error"] == "NotAUnit"


def test_compat_gate_witness_details():
    rep = run_suite("compat-gate", seed=0)
    assert rep.passed
    rej = rep.details["rejection"]
    assert not rej["passed"] and not rej["certified"]
    assert rej["witness"]["val(delta(r))"] == {"exact": True, "value": 0}
