import random

import pytest
from hypothesis import given, settings, strategies as st

from skewps import (IDENTITY, Inner, Level, Matrix, NotAUnit, SkewSeries, TRIVIAL, Twist, Zp,
                    deriv)
from skewps.series import sps_invert_unit, sps_val, x_mul_coeff
from skewps.reparam import random_series
from skewps.samples import config_twist

import oracles


Z28 = Zp(2, 8)
M26 = Matrix(2, Zp(2, 6))
INNER = Twist(IDENTITY, deriv(Inner(M26.element([[0, 2], [0, 0]]))))


def series(ring, twist, coeffs, cap=None):
    return SkewSeries(ring, twist, ring.N if cap is None else cap,
                      [ring.element(c) for c in coeffs])


def test_val_examples():
    assert sps_val(series(Z28, TRIVIAL, [2, 1])) == Level(1)
    assert series(Z28, TRIVIAL, [0, 0, 0, 1]).val() == Level(3)
    z = SkewSeries.zero(Z28, TRIVIAL)
    assert z.val() == Level.at_least(8)


def test_x_mul_coeff():
    r = M26.element([[1, 2], [3, 4]])
    s, d = x_mul_coeff(TRIVIAL, r)
    assert s == r and d.is_zero()
    s, d = x_mul_coeff(INNER, M26.unit(1, 0))
    assert s == M26.unit(1, 0)
    assert d == M26.element([[2, 0], [0, 62]])
    s, d = x_mul_coeff(INNER, M26.one())
    assert s == M26.one() and d.is_zero()


def test_mul_examples():
    one_x = series(Z28, TRIVIAL, [1, 1])
    assert one_x * one_x == series(Z28, TRIVIAL, [1, 2, 1])
    r = Z28.element(3)
    sx = series(Z28, TRIVIAL, [0, 5])
    assert r * sx == series(Z28, TRIVIAL, [0, 15])


def test_matrix_inner_example():
    x = SkewSeries.variable(M26, INNER)
    e21x = SkewSeries(M26, INNER, 6, [M26.zero(), M26.unit(1, 0)])
    got = x * e21x
    expect = oracles.skew_mul([oracles.mat_zero(), [[1, 0], [0, 1]]],
                              [oracles.mat_zero(), oracles.mat_unit(1, 0)],
                              lambda c: c, _inner_oracle, _madd, _mmul, oracles.mat_zero())
    assert _as_lists(got) == _reduce_jagged(expect, 6)
    # e21 x^2 + 2(e11 - e22) x
    assert got.coeffs[1] == M26.element([[2, 0], [0, 62]]).reduce(5)
    assert got.coeffs[2] == M26.unit(1, 0).reduce(4)


def _madd(a, b):
    return oracles.mat_add(a, b, 64)


def _mmul(a, b):
    return oracles.mat_mul(a, b, 64)


def _inner_oracle(c, t=((0, 2), (0, 0))):
    t = [list(r) for r in t]
    return oracles.mat_sub(oracles.mat_mul(t, c, 64), oracles.mat_mul(c, t, 64), 64)


def _as_lists(s):
    return [[list(r) for r in c.data] for c in s.coeffs]


def _reduce_jagged(coeffs, cap):
    out = []
    for i in range(cap):
        c = coeffs[i] if i < len(coeffs) else oracles.mat_zero()
        out.append([[a % 2 ** (cap - i) for a in r] for r in c])
    return out


mat_entry = st.integers(0, 63)
mat_st = st.lists(mat_entry, min_size=4, max_size=4).map(lambda v: [v[:2], v[2:]])


@settings(max_examples=60, deadline=None)
@given(st.lists(mat_st, min_size=1, max_size=4), st.lists(mat_st, min_size=1, max_size=4))
def test_product_matches_naive_oracle(a, b):
    A = SkewSeries(M26, INNER, 6, [M26.element(c) for c in a])
    B = SkewSeries(M26, INNER, 6, [M26.element(c) for c in b])
    expect = oracles.skew_mul(a, b, lambda c: c, _inner_oracle, _madd, _mmul,
                              oracles.mat_zero())
    assert _as_lists(A * B) == _reduce_jagged(expect, 6)


def test_module_axioms():
    a = series(Z28, TRIVIAL, [5, 3, 1])
    assert a + SkewSeries.zero(Z28, TRIVIAL) == a
    assert Z28.one() * a == a
    x = SkewSeries.variable(Z28, TRIVIAL)
    assert (x + (-Z28.one()) * x).is_zero()


def test_invert_examples():
    one = SkewSeries.one(Z28, TRIVIAL)
    assert sps_invert_unit(one) == one
    Z26 = Zp(2, 6)
    s = series(Z26, TRIVIAL, [1, 63])            # 1 - x
    inv = s.inverse()
    assert [c.data for c in inv.coeffs] == [1] * 6
    with pytest.raises(NotAUnit):
        series(Z28, TRIVIAL, [2, 1]).inverse()


def test_two_sided_inverse_random_units():
    rng = random.Random(4)
    for R in (Zp(2, 8), Matrix(2, Zp(2, 8))):
        tw = config_twist(R, rng)
        for _ in range(10):
            s = random_series(R, tw, R.N, rng)
            s = s.like([R.random_unit(rng)] + list(s.coeffs[1:]))
            si = s.inverse()
            one = SkewSeries.one(R, tw)
            assert (s * si).agrees(one) and (si * s).agrees(one)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([4, 8]))
def test_associativity_and_filtration(seed, N):
    rng = random.Random(seed)
    R = Matrix(2, Zp(2, N))
    tw = config_twist(R, rng)
    a, b, c = (random_series(R, tw, N, rng) for _ in range(3))
    assert ((a * b) * c).agrees(a * (b * c))
    assert (a * (b + c)).agrees(a * b + a * c)
    fa, fb = a.val().value, b.val().value
    assert (a * b).val().value >= min(fa + fb, N)
    assert (a + b).val().value >= min(fa, fb)
    x = SkewSeries.variable(R, tw)
    assert (x * a).val().value >= min(fa + 1, N)


def test_truncation_is_reduction():
    rng = random.Random(0)
    s = random_series(Z28, TRIVIAL, 8, rng)
    t = s.truncate(5)
    assert t.cap == 5 and t.agrees(s)
