import random
from math import comb

import pytest

from skewps import (IDENTITY, HypothesisViolated, Inner, Level, Matrix, SkewSeries, TRIVIAL,
                    Twist, ValueTooLow, Zp, beta_coeffs, change_variable, deriv, gamma_coeffs)
from skewps.reparam import (Scale, Shift, check_filtration_equality, example_counterexample,
                            poly_substitute_shift, random_series, read_off_twist,
                            substitute_shift, verify_new_twist)
from skewps.samples import config_twist

import oracles


Z28 = Zp(2, 8)
M28 = Matrix(2, Z28)
MOD = 256


def _madd(a, b):
    return oracles.mat_add(a, b, MOD)


def _mmul(a, b):
    return oracles.mat_mul(a, b, MOD)


def _inner(t):
    return lambda c: oracles.mat_sub(_mmul(t, c), _mmul(c, t), MOD)


def _lists(e):
    return [list(r) for r in e.data]


def test_beta_first_row():
    t = Z28.element(6)
    assert beta_coeffs(TRIVIAL, t, 1)[1][1] == -t


def test_beta_binomial_when_commutative():
    t = Z28.element(2)
    table = beta_coeffs(TRIVIAL, t, 8)
    for n in range(9):
        for i in range(n + 1):
            assert table[n][i].data == comb(n, i) * (-2) ** i % MOD


def test_beta_matrix_table_against_oracle():
    tw = Twist(IDENTITY, deriv(Inner(M28.element([[0, 2], [0, 0]]))))
    t = M28.element([[2, 0], [0, 0]])
    table = beta_coeffs(tw, t, 3)
    T = [[0, 2], [0, 0]]
    minus_t = [[MOD - 2, 0], [0, 0]]
    I = [[1, 0], [0, 1]]
    for n in range(4):
        power = oracles.skew_power([minus_t, I], n, lambda c: c, _inner(T), _madd, _mmul,
                                   oracles.mat_zero(), I)
        # beta[n][i] multiplies x^(n - i)
        assert [_lists(e) for e in table[n]] == [power[n - i] for i in range(n + 1)]
    assert table.min_excess() >= 0


def test_gamma_examples():
    a = Z28.element(3)
    table = gamma_coeffs(TRIVIAL, a, 6)
    assert all(table[n][0].data == pow(3, n, MOD) for n in range(7))
    tw = Twist(IDENTITY, deriv(Inner(M28.element([[2, 0], [0, 0]]))))
    g1 = gamma_coeffs(tw, M28.one(), 4)
    assert all(g1[n][0] == M28.one() for n in range(5))


def test_gamma_matrix_table_against_oracle():
    tw = Twist(IDENTITY, deriv(Inner(M28.element([[0, 0], [2, 0]]))))
    a = M28.element([[1, 2], [0, 1]])
    table = gamma_coeffs(tw, a, 3)
    T = [[0, 0], [2, 0]]
    A = [[1, 2], [0, 1]]
    I = [[1, 0], [0, 1]]
    for n in range(4):
        power = oracles.skew_power([oracles.mat_zero(), A], n, lambda c: c, _inner(T), _madd,
                                   _mmul, oracles.mat_zero(), I)
        assert [_lists(e) for e in table[n]] == [power[n - i] for i in range(n + 1)]
    assert table.min_excess() >= 0


def test_beta_needs_positive_valuation():
    with pytest.raises(ValueTooLow):
        beta_coeffs(TRIVIAL, Z28.one(), 3)


def test_shift_of_square():
    t = Z28.element(2)
    p = SkewSeries(Z28, TRIVIAL, 8, [0, 0, 1])
    assert substitute_shift(p, t) == SkewSeries(Z28, TRIVIAL, 8, [4, MOD - 4, 1])


def test_counterexample_polynomial_mode():
    one = Z28.one()
    cube = [Z28.element(c) for c in (1, 3, 3, 1)]      # (x + 1)^3
    got = poly_substitute_shift(TRIVIAL, cube, one, unsafe=True)
    assert [c.data for c in got] == [0, 0, 0, 1]
    rows = example_counterexample(Z28, 7)
    assert [(r["f_x"], r["f_y"]) for r in rows] == [(Level(0), Level(n)) for n in range(1, 8)]


def test_shift_refuses_unit_t():
    with pytest.raises(HypothesisViolated):
        Shift(Z28.one()).check()
    s = SkewSeries(Z28, TRIVIAL, 8, [1, 1])
    with pytest.raises(HypothesisViolated):
        change_variable(s, Shift(Z28.one()))


def test_round_trips():
    rng = random.Random(2)
    for R in (Z28, M28):
        tw = config_twist(R, rng)
        for move in (Shift(R.random(rng, val=1)), Scale(R.random_unit(rng))):
            new = move.new_twist(tw)
            for _ in range(10):
                p = random_series(R, tw, R.N, rng)
                q = move.to_new(p, new)
                assert move.to_old(q, tw) == p
                assert q.val() == p.val()


def test_filtration_equality_suites():
    rng = random.Random(6)
    for R in (Z28, M28):
        tw = config_twist(R, rng)
        assert check_filtration_equality(tw, R, Shift(R.random(rng, val=2)), 50, 0).passed
        assert check_filtration_equality(tw, R, Scale(R.random_unit(rng)), 50, 0).passed


def test_shift_by_central_t_keeps_delta():
    t = Z28.element(4)
    tw = TRIVIAL
    new = Shift(t).new_twist(tw)
    rng = random.Random(0)
    for _ in range(20):
        r = Z28.random(rng)
        assert new.delta.apply(r).is_zero()
        s_ro, d_ro = read_off_twist(Shift(t), tw, r)
        assert s_ro.agrees(r) and d_ro.is_zero()


def test_shift_twist_against_display():
    """delta'(r) = delta(r) - (t r - sigma(r) t), checked by an integer-matrix oracle."""
    rng = random.Random(8)
    T = [[0, 2], [0, 0]]
    tw = Twist(IDENTITY, deriv(Inner(M28.element(T))))
    t = M28.element([[2, 4], [6, 0]])
    tl = _lists(t)
    new = Shift(t).new_twist(tw)
    for _ in range(200):
        r = M28.random(rng)
        rl = _lists(r)
        expect = oracles.mat_sub(_inner(T)(rl), _inner(tl)(rl), MOD)
        assert _lists(new.delta.apply(r)) == expect
    assert verify_new_twist(Shift(t), tw, new, M28, 100, 0).passed


def test_scale_twist_against_display():
    """sigma' = c_a sigma and delta' = a delta, as read off from y r."""
    rng = random.Random(9)
    T = [[0, 2], [0, 0]]
    tw = Twist(IDENTITY, deriv(Inner(M28.element(T))))
    a = M28.element([[1, 2], [4, 3]])
    A = _lists(a)
    A_inv = _lists(a.inverse())
    new = Scale(a).new_twist(tw)
    for _ in range(100):
        r = M28.random(rng)
        rl = _lists(r)
        assert _lists(new.sigma.apply(r)) == _mmul(_mmul(A, rl), A_inv)
        assert _lists(new.delta.apply(r)) == _mmul(A, _inner(T)(rl))
        s_ro, d_ro = read_off_twist(Scale(a), tw, r)
        assert s_ro.agrees(new.sigma.apply(r)) and d_ro.agrees(new.delta.apply(r))


def test_change_variable_reports():
    rng = random.Random(1)
    tw = config_twist(M28, rng)
    s = random_series(M28, tw, 8, rng)
    res = change_variable(s, Scale(M28.random_unit(rng)), trials=50)
    assert res.report["read_off"]["passed"] and res.report["compatible"]["passed"]
    assert res.series.val() == s.val()
