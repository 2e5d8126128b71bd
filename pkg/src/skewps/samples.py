"""Random compatible configurations for the property suites.

Every generator takes an explicit ``random.Random``; suites derive theirs
from the global seed as ``Random(f"{seed}/{suite}/...")``.
"""

from __future__ import annotations

from .rings import Matrix, Zp, uniformiser
from .twist import (IDENTITY, Auto, Conjugation, Deriv, FrobeniusPow, Inner, ScaleUniformiser,
                    TauTimes, Twist, deriv)
from .untwist import IsoContext


def base_auto(D, rng, near_identity=False):
    """A random automorphism of D = Zp or FqSeries.

    ``near_identity`` restricts to tau with v(r - tau(r)) > v(r), i.e. identity
    or a uniformiser scaling by u = 1 mod pi.
    """
    if isinstance(D, Zp):
        return IDENTITY
    choice = rng.randrange(4)
    if near_identity:
        choice = rng.choice((0, 2))
    steps = []
    if choice in (1, 3):
        steps.append(FrobeniusPow(rng.randrange(1, D.field.e + 1)))
    if choice in (2, 3):
        u = D.random_unit(rng)
        if near_identity:
            u = D.one() + D.random(rng, val=rng.randrange(1, D.N))
        steps.append(ScaleUniformiser(u))
    return Auto(tuple(steps))


def base_deriv(D, tau, rng):
    """theta = t (1 - tau) with v(t) >= 1, or zero."""
    if tau.is_identity or rng.random() < 0.25:
        return Deriv()
    return deriv(TauTimes(D.random(rng, val=rng.randrange(1, D.N)), tau))


def base_twist(D, rng):
    tau = base_auto(D, rng)
    return Twist(tau, base_deriv(D, tau, rng))


def matrix_twist(M, rng):
    """c_a o M(tau) with an inner derivation of positive valuation."""
    from .twist import MatrixLift
    tau = base_auto(M.inner, rng)
    sigma = Auto((Conjugation(M.random_unit(rng)), MatrixLift(tau)))
    return Twist(sigma, deriv(Inner(M.random(rng, val=rng.randrange(1, M.N)))))


def config_twist(ring, rng):
    if isinstance(ring, Matrix):
        return matrix_twist(ring, rng)
    return base_twist(ring, rng)


def exact_lift(D, rng, k):
    """A unit of D whose canonical representative lives below level N - k."""
    e = D.random_unit(rng, prec=D.N - k)
    return e.lift(D.N)


def iso_context(D, rng, n=2, k=None):
    """Random witness data (a, tau, theta, u) on M_n(D) satisfying the hypotheses."""
    M = Matrix(n, D)
    k = rng.randrange(0, 3) if k is None else k
    while True:
        grid = [[exact_lift(D, rng, k) if rng.random() < 0.7 else
                 D.random(rng, prec=D.N - k).lift(D.N) for _ in range(n)] for _ in range(n)]
        b = M.from_entries(grid)
        try:
            b.inverse()
            break
        except Exception:
            continue
    a = b if k == 0 else uniformiser(M) ** k * b
    near = rng.random() < 0.5
    tau = base_auto(D, rng, near_identity=near)
    theta = base_deriv(D, tau, rng)
    near = near or tau.is_identity
    u11 = D.random(rng, val=0 if near and rng.random() < 0.7 else rng.randrange(1, D.N))
    u = M.scalar(u11) + M.random(rng, val=rng.randrange(1, D.N))
    return IsoContext(M, a, tau, theta, u)


def clean_context(D, rng, n=2):
    """sigma = M(tau), delta = M(theta): the isomorphism is a pure regrouping."""
    M = Matrix(n, D)
    tau = base_auto(D, rng)
    return IsoContext(M, M.one(), tau, base_deriv(D, tau, rng), M.zero())
