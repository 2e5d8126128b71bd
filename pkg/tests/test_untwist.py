import random

import pytest

from skewps import (IDENTITY, Auto, FqSeries, FrobeniusPow, Level, Matrix,
                    MatrixSeries, NotCompatible, OrbitNotClosed, Product, SkewSeries, TauTimes,
                    Twist, Zp, auto, deriv, split_orbits, theorem_A_map, uniformiser)
from skewps.twist import (Componentwise, ComponentwiseD, Deriv, FactorPermutation, Inner,
                          MatrixLift, MatrixLiftD)
from skewps.untwist import (FactoredDelta, FactoredSigma, normalize_inner, transpose,
                            untwist_delta)
from skewps.reparam import random_series
from skewps.samples import clean_context, iso_context


Z28 = Zp(2, 8)
M28 = Matrix(2, Z28)


# -- orbit splitting -------------------------------------------------------------------------

def test_split_single_factor_is_identity():
    P = Product((Z28,))
    sp = split_orbits(P, Twist(), (0,))
    assert sp.trivial


def test_split_whole_orbit_is_trivial():
    P = Product((Z28, Z28))
    tw = Twist(Auto((FactorPermutation((1, 0)),)))
    assert split_orbits(P, tw, (0, 1)).trivial


def test_split_refuses_non_stable_set():
    P = Product((Z28, Z28))
    tw = Twist(Auto((FactorPermutation((1, 0)),)))
    with pytest.raises(OrbitNotClosed):
        split_orbits(P, tw, (0,))


def test_split_two_fixed_factors_round_trip():
    F = FqSeries(4, 8)
    P = Product((Z28, F))
    tau = auto(FrobeniusPow(1))
    tw = Twist(Auto((Componentwise((IDENTITY, tau)),)),
               Deriv((ComponentwiseD((deriv(), deriv(TauTimes(uniformiser(F), tau)))),)))
    sp = split_orbits(P, tw, (0,), trials=50)
    assert not sp.trivial
    rng = random.Random(3)
    for _ in range(100):
        a = random_series(P, tw, 8, rng)
        b = random_series(P, tw, 8, rng)
        pa, pb = sp.phi(a), sp.phi(b)
        assert sp.theta(pa) == a
        assert sp.phi(sp.theta(pa)) == pa
        pab = sp.phi(a * b)
        assert pab[0] == pa[0] * pb[0] and pab[1] == pa[1] * pb[1]
        assert Level.min_of([pa[0].val(), pa[1].val()]) == a.val()


# -- normalize_inner ------------------------------------------------------------------------

def test_normalize_unit_witness():
    a = M28.element([[1, 2], [3, 5]])
    n = normalize_inner(FactoredSigma(M28, a))
    assert n.b == a and n.k == 0 and n.tau == IDENTITY


def test_normalize_uniformiser():
    n = normalize_inner(FactoredSigma(M28, uniformiser(M28)))
    assert n.b.agrees(M28.one()) and n.k == 1
    assert n.pi_power == M28.element([[2, 0], [0, 2]])


def test_normalize_peels_uniformiser():
    a = M28.element([[2, 4], [0, 2]])              # 2 (I + 2 e12)
    n = normalize_inner(FactoredSigma(M28, a))
    assert n.k == 1
    assert n.b.agrees(M28.element([[1, 2], [0, 1]]), 7)
    assert n.b.val() == Level(0) and n.b.inverse().val() == Level(0)


def test_normalize_preserves_sigma_on_samples():
    rng = random.Random(0)
    from skewps import Conjugation
    for _ in range(10):
        ctx = iso_context(FqSeries(4, 6), rng)
        fs = ctx.factored_sigma()
        n = normalize_inner(fs)
        lhs = Auto((Conjugation(n.b), MatrixLift(n.tau)))
        for i in range(30):
            r = ctx.ring.random(rng, val=i % 6)
            assert lhs.apply(r).agrees(fs.auto().apply(r))


# -- untwist_delta -------------------------------------------------------------------------------

def test_untwist_zero_u():
    theta = deriv()
    u_prime, theta_prime = untwist_delta(FactoredDelta(theta, M28.zero()), IDENTITY, M28)
    assert u_prime.is_zero() and theta_prime.is_zero


def test_untwist_central_u():
    F = FqSeries(4, 8)
    M = Matrix(2, F)
    tau = auto(FrobeniusPow(1))
    c = F.element([3, 1])
    u_prime, theta_prime = untwist_delta(FactoredDelta(deriv(), M.scalar(c)), tau, M)
    assert u_prime.is_zero()
    rng = random.Random(1)
    for _ in range(50):
        r = F.random(rng)
        # d_{tau,c}(r) = c r - tau(r) c
        assert theta_prime.apply(r).agrees(c * r - tau.apply(r) * c)


def test_untwist_example():
    u = M28.element([[1, 2], [0, 1]])
    u_prime, _ = untwist_delta(FactoredDelta(deriv(), u), IDENTITY, M28)
    assert u_prime == M28.element([[0, 2], [0, 0]])
    assert u_prime.val() == Level(1)


def test_untwist_rejects_incompatible_u():
    u = M28.element([[1, 1], [0, 1]])
    with pytest.raises(NotCompatible):
        untwist_delta(FactoredDelta(deriv(), u), IDENTITY, M28)


def test_untwist_reconstructs_delta():
    rng = random.Random(2)
    for _ in range(10):
        ctx = iso_context(Z28, rng)
        fd = ctx.factored_delta()
        u_prime, theta_prime = untwist_delta(fd, ctx.tau, ctx.ring)
        assert u_prime.vlow() >= 1
        mt = Auto((MatrixLift(ctx.tau),))
        old = Twist(mt, fd.inner_deriv(ctx.tau))
        new = Twist(mt, Deriv((MatrixLiftD(theta_prime), Inner(u_prime))))
        for i in range(30):
            r = ctx.ring.random(rng, val=i % 8)
            assert new.delta.apply(r).agrees(old.delta.apply(r))


# -- the isomorphism -------------------------------------------------------------------------------

def test_clean_context_is_transpose():
    rng = random.Random(4)
    ctx = clean_context(FqSeries(4, 6), rng)
    iso = theorem_A_map(ctx, trials=20)
    tw = ctx.twist()
    for _ in range(10):
        s = random_series(ctx.ring, tw, 6, rng)
        assert iso.apply(s) == transpose(s, iso.dtwist)


def _check_iso(ctx, rng, pairs):
    iso = theorem_A_map(ctx, trials=20)
    assert all(st["passed"] for st in iso.chain)
    assert [st["stage"] for st in iso.chain] == ["normalize-inner", "scale", "untwist-delta",
                                                 "shift", "transpose"]
    assert iso.apply(iso.statement_element()) == iso.y_identity()
    tw = ctx.twist()
    M, N = ctx.ring, ctx.ring.N
    for _ in range(pairs):
        a = random_series(M, tw, N, rng)
        b = random_series(M, tw, N, rng)
        pa, pb = iso.apply(a), iso.apply(b)
        assert iso.apply(a * b) == pa * pb
        assert pa.val() == a.val()
        assert iso.unapply(pa) == a
        r = M.random(rng)
        pr = iso.apply(SkewSeries.constant(r, tw))
        assert all(pr.entries[i][j].coeffs[0].agrees(M.entry(r, i, j))
                   for i in range(M.n) for j in range(M.n))
    return iso


def test_iso_over_zp():
    rng = random.Random(5)
    for _ in range(3):
        _check_iso(iso_context(Z28, rng), rng, 30)


def test_iso_over_f4_series_at_level_8():
    rng = random.Random(6)
    for _ in range(2):
        _check_iso(iso_context(FqSeries(4, 8), rng), rng, 20)


def test_iso_with_frobenius_and_positive_k():
    F = FqSeries(4, 6)
    for seed in (1, 4):
        rng = random.Random(seed)
        ctx = iso_context(F, rng, k=1)
        assert not ctx.tau.is_identity
        iso = _check_iso(ctx, rng, 20)
        assert iso.k == 1


def test_matrix_series_ring_ops():
    rng = random.Random(8)
    ctx = iso_context(Z28, rng)
    iso = theorem_A_map(ctx, trials=10)
    tw = ctx.twist()
    a = random_series(ctx.ring, tw, 8, rng)
    b = random_series(ctx.ring, tw, 8, rng)
    pa, pb = iso.apply(a), iso.apply(b)
    assert iso.apply(a + b) == pa + pb
    assert iso.apply(a - b) == pa - pb
    assert (pa - pa).is_zero()
    one = MatrixSeries.scalar(SkewSeries.one(ctx.ring.inner, iso.dtwist), 2)
    assert pa * one == pa
