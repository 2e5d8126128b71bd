import random

from skewps import (IDENTITY, Auto, Conjugation, FqSeries, FrobeniusPow, Inner, Level, Matrix,
                    PiDerivative, Twist, Zp, auto, check_compatible, check_leibniz, deriv,
                    uniformiser)
from skewps.twist import (MatrixLift, ScaleUniformiser, TauTimes, apply_delta, apply_sigma,
                          check_sigma_homomorphism)
from skewps.samples import config_twist

import oracles


M26 = Matrix(2, Zp(2, 6))
MOD = 64


def test_identity_and_zero():
    r = M26.element([[3, 5], [7, 9]])
    assert apply_sigma(IDENTITY, r) == r
    assert deriv().apply(r).is_zero()


def test_conjugation_example():
    a = M26.element([[1, 1], [0, 1]])
    got = apply_sigma(auto(Conjugation(a)), M26.unit(1, 0))
    A = [[1, 1], [0, 1]]
    A_inv = [[1, MOD - 1], [0, 1]]
    expect = oracles.mat_mul(oracles.mat_mul(A, oracles.mat_unit(1, 0), MOD), A_inv, MOD)
    assert [list(r) for r in got.data] == expect
    # e21 + e11 - e22 - e12
    assert expect == [[1, MOD - 1], [1, MOD - 1]]


def test_frobenius_on_f4():
    F = FqSeries(4, 3)
    w = F.element([2])
    got = apply_sigma(auto(FrobeniusPow(1)), w)
    assert got.data[0] == oracles.f4_mul(2, 2) == 3     # w^2 = w + 1


def test_inner_example():
    t = M26.element([[0, 2], [0, 0]])
    got = apply_delta(deriv(Inner(t)), M26.unit(1, 0), IDENTITY)
    T = [[0, 2], [0, 0]]
    E = oracles.mat_unit(1, 0)
    expect = oracles.mat_sub(oracles.mat_mul(T, E, MOD), oracles.mat_mul(E, T, MOD), MOD)
    assert [list(r) for r in got.data] == expect == [[2, 0], [0, MOD - 2]]


def test_inner_central_vanishes():
    t = M26.element([[2, 0], [0, 2]])
    rng = random.Random(1)
    for _ in range(20):
        assert deriv(Inner(t)).bind(IDENTITY).apply(M26.random(rng)).is_zero()


def test_leibniz_examples():
    assert check_leibniz(Twist(), M26, 50, 0).passed
    t = M26.element([[0, 2], [0, 0]])
    assert check_leibniz(Twist(IDENTITY, deriv(Inner(t))), M26, 100, 0).passed


class _Mismatched:
    """Inner(t) evaluated with sigma = c_a while the twist declares sigma = id."""

    def __init__(self, t, a):
        self.t, self.c = t, Conjugation(a)

    def apply(self, r):
        return self.t * r - self.c.apply(r) * self.t

    def bind(self, sigma):
        return self

    def certified(self):
        return False


def test_leibniz_catches_corrupted_descriptor():
    from skewps import Deriv
    t = M26.element([[0, 2], [0, 0]])
    a = M26.element([[1, 1], [0, 1]])
    bad = Twist(IDENTITY, Deriv((_Mismatched(t, a),)))
    rep = check_leibniz(bad, M26, 100, 0)
    assert not rep.passed and rep.witness is not None


def test_compatible_examples():
    assert check_compatible(Twist(), M26, 50, 0).passed
    t = M26.element([[2, 4], [0, 6]])
    rep = check_compatible(Twist(IDENTITY, deriv(Inner(t))), M26, 100, 0)
    assert rep.passed and rep.certified


def test_d_dpi_is_rejected():
    F = FqSeries(4, 8)
    tw = Twist(IDENTITY, deriv(PiDerivative()))
    assert tw.delta.apply(uniformiser(F)).agrees(F.one())
    rep = check_compatible(tw, F, 50, 0)
    assert not rep.passed
    assert rep.witness["val(delta(r))"] == Level(0).to_json()
    # still a derivation
    assert check_leibniz(tw, F, 100, 0).passed


def test_inner_gain_at_least_one():
    rng = random.Random(5)
    M = Matrix(2, Zp(2, 8))
    for _ in range(20):
        t = M.random(rng, val=rng.randrange(1, 8))
        d = deriv(Inner(t)).bind(IDENTITY)
        for i in range(20):
            r = M.random(rng, val=i % 8)
            assert d.apply(r).vlow() >= min(r.vlow() + 1, 8)


def test_tau_times_pi_with_frobenius_gains():
    F = FqSeries(4, 8)
    tau = auto(FrobeniusPow(1))
    theta = deriv(TauTimes(uniformiser(F), tau))
    rng = random.Random(2)
    for i in range(100):
        r = F.random(rng, val=i % 8)
        assert theta.apply(r).vlow() >= min(r.vlow() + 1, 8)


def test_sigma_homomorphism_and_inverse():
    rng = random.Random(9)
    F = FqSeries(9, 6)
    u = F.one() + uniformiser(F)
    for sigma in (auto(FrobeniusPow(1)), auto(ScaleUniformiser(u)),
                  Auto((FrobeniusPow(1), ScaleUniformiser(u)))):
        assert check_sigma_homomorphism(sigma, F, 100, 0).passed
        for _ in range(50):
            r = F.random(rng)
            assert sigma.inverse().apply(sigma.apply(r)).agrees(r)
    M = Matrix(2, F)
    s = Auto((Conjugation(M.random_unit(rng)), MatrixLift(auto(FrobeniusPow(1)))))
    assert check_sigma_homomorphism(s, M, 100, 0).passed


def test_random_configurations_are_compatible():
    rng = random.Random(11)
    for R in (Zp(2, 8), FqSeries(4, 8), Matrix(2, FqSeries(4, 6))):
        for _ in range(3):
            tw = config_twist(R, rng)
            assert check_leibniz(tw, R, 50, 0).passed
            assert check_compatible(tw, R, 50, 0).passed
