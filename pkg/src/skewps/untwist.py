"""Untwisting: orbit splitting, normalising inner witnesses, the matrix isomorphism.

The main object is :class:`MatrixIso`, a computable isomorphism

    phi: M_n(D)[[x; sigma, delta]]  ->  M_n(D[[y; tau, theta']])

for sigma = c_a o M_n(tau) and b^-1 delta = M_n(theta) + d_{M(tau),u}, where
a = pi^k b with b a unit.  It is assembled from two changes of variable,
x' = b^-1 x and x'' = x' - u', followed by regrouping coefficients by matrix
entry.  In the statement's form, y = phi(a' x - t') with a' = b^-1, t' = u'.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import (NotAUnit, NotCompatible, NotInvertible, OrbitNotClosed,
                     PrecisionError, ShapeMismatch)
from .level import Level
from .rings import Element, Matrix, Product, uniformiser
from .series import SkewSeries
from .twist import (IDENTITY, Auto, Conjugation, Deriv, Inner, LeftMultiple, MatrixLift,
                    MatrixLiftD, TauTimes, Twist)
from . import reparam


# -- orbit splitting -------------------------------------------------------------------

def _embed(P, idx, parts):
    """Element of the product P supported on factors ``idx``."""
    k = min(p.prec for p in parts) if parts else P.N
    full = [P.factors[i].zero(k) for i in range(len(P.factors))]
    for i, p in zip(idx, parts):
        full[i] = p
    return P.from_parts(full)


def _sub_ring(P, idx):
    return Product(tuple(P.factors[i] for i in idx))


@dataclass(frozen=True)
class Restricted:
    """sigma or delta of a product ring, restricted to the factors ``idx``."""

    full: object
    ring: Product
    idx: tuple
    inverse_full: object = None

    def apply(self, r):
        parts = [r.ring.part(r, j) for j in range(len(self.idx))]
        img = self.full.apply(_embed(self.ring, self.idx, parts))
        return r.ring.from_parts([self.ring.part(img, i) for i in self.idx])

    def inverse(self):
        return Restricted(self.full.inverse(), self.ring, self.idx, self.full)

    def bind(self, sigma):
        return self

    def certified(self):
        return self.full.certified()

    def to_json(self):
        return {"restrict": list(self.idx), "of": self.full.to_json()}


@dataclass
class Split:
    """R = B x C with R[[x]] = B[[x_B]] x C[[x_C]]; ``trivial`` when S or S' is empty."""

    ring: Product
    twist: Twist
    idx: tuple
    rest: tuple
    trivial: bool
    ring_b: Product = None
    twist_b: Twist = None
    ring_c: Product = None
    twist_c: Twist = None

    def phi(self, s):
        """Series over R -> (series over B, series over C)."""
        if self.trivial:
            return s
        out = []
        for ring, tw, idx in ((self.ring_b, self.twist_b, self.idx),
                              (self.ring_c, self.twist_c, self.rest)):
            coeffs = [ring.from_parts([self.ring.part(c, i) for i in idx]) for c in s.coeffs]
            out.append(SkewSeries(ring, tw, s.cap, coeffs))
        return tuple(out)

    def theta(self, pair):
        if self.trivial:
            return pair
        sb, sc = pair
        P = self.ring
        coeffs = []
        for cb, cc in zip(sb.coeffs, sc.coeffs):
            parts = [None] * len(P.factors)
            for j, i in enumerate(self.idx):
                parts[i] = sb.ring.part(cb, j)
            for j, i in enumerate(self.rest):
                parts[i] = sc.ring.part(cc, j)
            coeffs.append(P.from_parts(parts))
        return SkewSeries(P, self.twist, sb.cap, coeffs)


def split_orbits(ring, twist, S, trials=100, seed=0):
    """Split a product ring along a sigma-stable set S of factor indices."""
    if not isinstance(ring, Product):
        raise ShapeMismatch(f"orbit splitting needs a product ring, got {ring}")
    n = len(ring.factors)
    idx = tuple(sorted(set(S)))
    if any(i < 0 or i >= n for i in idx):
        raise ShapeMismatch(f"factor indices {idx} out of range for {n} factors")
    rest = tuple(i for i in range(n) if i not in idx)
    if not idx or not rest:
        return Split(ring, twist, idx, rest, trivial=True)
    rng = random.Random(f"{seed}/split-orbits")
    for which, group in (("S", idx), ("complement", rest)):
        outside = [i for i in range(n) if i not in group]
        for _ in range(trials):
            parts = [ring.factors[i].random(rng) for i in group]
            r = _embed(ring, group, parts)
            for name, f in (("sigma", twist.sigma), ("delta", twist.delta)):
                img = f.apply(r)
                if any(not ring.part(img, i).is_zero() for i in outside):
                    raise OrbitNotClosed(f"{name} moves factors {list(group)} ({which}) "
                                         f"outside the set")
    out = Split(ring, twist, idx, rest, trivial=False)
    for attr, group in (("b", idx), ("c", rest)):
        sub = _sub_ring(ring, group)
        tw = Twist(Auto((Restricted(twist.sigma, ring, group),)),
                   Deriv((Restricted(twist.delta, ring, group),)))
        setattr(out, "ring_" + attr, sub)
        setattr(out, "twist_" + attr, tw)
    return out


# -- factored witnesses -------------------------------------------------------------

@dataclass(frozen=True)
class FactoredSigma:
    """sigma = c_a o M_n(tau) on M_n(D)."""

    ring: Matrix
    a: Element
    tau: Auto = IDENTITY

    def auto(self):
        steps = (MatrixLift(self.tau),)
        if not _is_one(self.a):
            steps = (Conjugation(self.a),) + steps
        return Auto(steps)

    def to_json(self):
        return {"a": self.a.to_json(), "tau": self.tau.to_json()}


@dataclass(frozen=True)
class FactoredDelta:
    """b^-1 delta = M_n(theta) + d_{M(tau),u}, where sigma = c_b o M_n(tau) up to pi."""

    theta: Deriv
    u: Element

    def inner_deriv(self, tau):
        """M_n(theta) + d_{M(tau),u}, bound to M(tau)."""
        mt = Auto((MatrixLift(tau),))
        terms = []
        if not self.theta.is_zero:
            terms.append(MatrixLiftD(self.theta.bind(tau)))
        if not self.u.is_zero():
            terms.append(Inner(self.u, mt))
        return Deriv(tuple(terms))

    def to_json(self):
        return {"theta": self.theta.to_json(), "u": self.u.to_json()}


def merge_tau_times(d):
    """Collect TauTimes terms sharing the same tau into one term."""
    merged, other = {}, []
    for t in d.terms:
        if isinstance(t, TauTimes):
            merged[t.tau] = merged[t.tau] + t.t if t.tau in merged else t.t
        else:
            other.append(t)
    terms = [TauTimes(c, tau) for tau, c in merged.items() if not c.is_zero() or c.exact is False]
    return Deriv(tuple(other + terms))


def _is_one(a):
    return a.agrees(a.ring.one())


@dataclass(frozen=True)
class Normalized:
    b: Element
    k: object
    tau: Auto
    pi_power: Element

    def to_json(self):
        return {"b": self.b.to_json(), "k": self.k, "tau": self.tau.to_json(),
                "Pi": self.pi_power.to_json()}


def normalize_inner(fs):
    """a = Pi b with Pi = pi~^k central and b a unit, so c_a o M(tau) = c_b o M(tau')."""
    a, M = fs.a, fs.ring
    if a.is_zero():
        raise NotInvertible("the inner witness is zero")
    raw, k = M.split_uniformiser(a.data, a.prec)
    b = Element(M, raw, a.prec)
    try:
        b.inverse()
    except NotAUnit:
        raise NotInvertible(f"{a!r} is not a power of the uniformiser times a unit") from None
    Pi = uniformiser(M) ** k
    # pi~ is central, so c_Pi is the identity and tau' = tau
    return Normalized(b, k, fs.tau, Pi)


def untwist_delta(fd, tau, ring):
    """u' = u - u11 I and theta' = theta + d_{tau,u11}; needs u = u11 I mod F_1."""
    u = fd.u
    u11 = ring.entry(u, 0, 0)
    u_prime = u - ring.scalar(u11)
    if u_prime.vlow() < 1:
        raise NotCompatible(f"u is not congruent to u11*I modulo F_1 (val(u - u11 I) = "
                            f"{u_prime.val()}); the derivation cannot be compatible")
    theta_prime = fd.theta.bind(tau)
    if not u11.is_zero():
        # D is commutative, so d_{tau,u11} = u11 (1 - tau); merge with theta's terms
        theta_prime = merge_tau_times(theta_prime + Deriv((TauTimes(u11, tau),)))
    return u_prime, theta_prime


# -- matrices of series -----------------------------------------------------------------

class MatrixSeries:
    """An n x n matrix of series over D, all with the same twist and cap."""

    __slots__ = ("n", "entries")

    def __init__(self, entries):
        self.entries = tuple(tuple(row) for row in entries)
        self.n = len(self.entries)

    @property
    def cap(self):
        return self.entries[0][0].cap

    @property
    def twist(self):
        return self.entries[0][0].twist

    @property
    def ring(self):
        return self.entries[0][0].ring

    @classmethod
    def scalar(cls, s, n):
        z = SkewSeries.zero(s.ring, s.twist, s.cap)
        return cls([[s if i == j else z for j in range(n)] for i in range(n)])

    def __add__(self, other):
        return MatrixSeries([[a + b for a, b in zip(r, s)]
                             for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return MatrixSeries([[a - b for a, b in zip(r, s)]
                             for r, s in zip(self.entries, other.entries)])

    def __mul__(self, other):
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.entries[i][0] * other.entries[0][j]
                for m in range(1, n):
                    acc = acc + self.entries[i][m] * other.entries[m][j]
                row.append(acc)
            out.append(row)
        return MatrixSeries(out)

    def val(self):
        return Level.min_of(e.val() for row in self.entries for e in row).capped(self.cap)

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other):
        return isinstance(other, MatrixSeries) and self.entries == other.entries

    __hash__ = None

    def to_json(self):
        return {"matrix": [[e.to_json() for e in row] for row in self.entries]}


def transpose(s, dtwist):
    """sum q_i x^i with q_i in M_n(D)  ->  the matrix (sum_i (q_i)_{jk} y^i)_{jk}."""
    M = s.ring
    n = M.n
    return MatrixSeries([[SkewSeries(M.inner, dtwist, s.cap,
                                     [M.entry(c, j, k) for c in s.coeffs])
                          for k in range(n)] for j in range(n)])


def untranspose(ms, M, mtwist):
    n = ms.n
    cap = ms.cap
    coeffs = [M.from_entries([[ms.entries[j][k].coeffs[i] for k in range(n)]
                              for j in range(n)]) for i in range(cap)]
    return SkewSeries(M, mtwist, cap, coeffs)


# -- the isomorphism ---------------------------------------------------------------------

def _agree_on_samples(f, g, ring, rng, trials):
    for i in range(trials):
        r = ring.random(rng, val=i % ring.N)
        if not f.apply(r).agrees(g.apply(r)):
            return {"r": r.to_json(), "lhs": f.apply(r).to_json(), "rhs": g.apply(r).to_json()}
    return None


@dataclass
class MatrixIso:
    ring: Matrix
    twist: Twist            # the original (sigma, delta) on M_n(D)
    b: Element
    k: object
    u_prime: Element
    tau: Auto
    theta_prime: Deriv
    twist1: Twist           # twist in x' = b^-1 x
    twist2: Twist           # twist in x'' = x' - u' (matrix form)
    dtwist: Twist           # (tau, theta') on D
    chain: list = field(default_factory=list)

    @property
    def a_statement(self):
        return self.b.inverse()

    @property
    def t_statement(self):
        return self.u_prime

    def _table(self, key):
        cache = self.__dict__.setdefault("_tables", {})
        if key not in cache:
            n = self.ring.N - 1
            if key == "to-x1":
                cache[key] = reparam.gamma_coeffs(self.twist1, self.b, n)
            elif key == "to-x2":
                cache[key] = reparam.beta_coeffs(self.twist2, -self.u_prime, n)
            elif key == "from-x2":
                cache[key] = reparam.beta_coeffs(self.twist1, self.u_prime, n)
            else:
                cache[key] = reparam.gamma_coeffs(self.twist, self.b.inverse(), n)
        return cache[key]

    def apply(self, s):
        if s.ring != self.ring:
            raise ShapeMismatch(f"series over {s.ring}, expected {self.ring}")
        if s.cap != self.ring.N:
            raise PrecisionError(f"series cap {s.cap} differs from the ring cap {self.ring.N}")
        s1 = reparam.substitute_scale(s.with_twist(self.twist1), self.b, self._table("to-x1"))
        s2 = reparam.substitute_shift(s1.with_twist(self.twist2), -self.u_prime,
                                      table=self._table("to-x2"))
        return transpose(s2, self.dtwist)

    def unapply(self, ms):
        s2 = untranspose(ms, self.ring, self.twist2)
        s1 = reparam.substitute_shift(s2.with_twist(self.twist1), self.u_prime,
                                      table=self._table("from-x2"))
        return reparam.substitute_scale(s1.with_twist(self.twist), self.b.inverse(),
                                        self._table("from-x1"))

    def y_identity(self, cap=None):
        cap = self.ring.N if cap is None else cap
        D = self.ring.inner
        y = SkewSeries.variable(D, self.dtwist, cap)
        return MatrixSeries.scalar(y, self.ring.n)

    def statement_element(self, cap=None):
        """a' x - t' in the original ring."""
        cap = self.ring.N if cap is None else cap
        return SkewSeries(self.ring, self.twist, cap, [-self.u_prime, self.a_statement])

    def to_json(self):
        return {"b": self.b.to_json(), "k": self.k, "u_prime": self.u_prime.to_json(),
                "tau": self.tau.to_json(), "theta_prime": self.theta_prime.to_json(),
                "statement": {"a": self.a_statement.to_json(), "t": self.t_statement.to_json()},
                "chain": self.chain}


@dataclass(frozen=True)
class IsoContext:
    """Witness data: sigma = c_a o M(tau), b^-1 delta = M(theta) + d_{M(tau),u}."""

    ring: Matrix
    a: Element
    tau: Auto
    theta: Deriv
    u: Element

    def factored_sigma(self):
        return FactoredSigma(self.ring, self.a, self.tau)

    def factored_delta(self):
        return FactoredDelta(self.theta, self.u)

    def twist(self):
        b = normalize_inner(self.factored_sigma()).b
        inner = self.factored_delta().inner_deriv(self.tau)
        delta = inner
        if not _is_one(b) and not inner.is_zero:
            delta = Deriv((LeftMultiple(b, inner),))
        return Twist(self.factored_sigma().auto(), delta)

    def to_json(self):
        return {"ring": self.ring.describe(), "a": self.a.to_json(),
                "tau": self.tau.to_json(), "theta": self.theta.to_json(),
                "u": self.u.to_json()}


def theorem_A_map(ctx, trials=50, seed=0):
    """Build the isomorphism and its certificate chain; raises on a failed stage."""
    M, tau = ctx.ring, ctx.tau
    if not isinstance(M, Matrix):
        raise ShapeMismatch(f"expected a matrix ring, got {M}")
    twist0 = ctx.twist()
    rng = random.Random(f"{seed}/theorem-a")
    chain = []

    def stage(name, witness, check, ok, detail=None):
        entry = {"stage": name, "witness": witness, "check": check, "passed": ok,
                 "seed": seed}
        if detail is not None:
            entry["failure"] = detail
        chain.append(entry)
        if not ok:
            raise NotCompatible(f"stage {name} failed: {check}: {detail}")

    fs = ctx.factored_sigma()
    norm = normalize_inner(fs)
    b = norm.b
    ok = b.val() == 0 and b.inverse().val() == 0
    bad = _agree_on_samples(Auto((Conjugation(b), MatrixLift(tau))), fs.auto(), M, rng, trials)
    stage("normalize-inner", norm.to_json(),
          "c_b o M(tau') = sigma on samples; val(b) = val(b^-1) = 0", ok and bad is None, bad)

    inner = ctx.factored_delta().inner_deriv(tau)
    twist1 = Twist(Auto((MatrixLift(tau),)), inner)
    scaled = reparam.Scale(b.inverse()).new_twist(twist0)
    bad = (_agree_on_samples(scaled.sigma, twist1.sigma, M, rng, trials)
           or _agree_on_samples(scaled.delta, twist1.delta, M, rng, trials))
    stage("scale", {"a": b.inverse().to_json()},
          "x' = b^-1 x has twist (M(tau), M(theta) + d_{M(tau),u})", bad is None, bad)

    u_prime, theta_prime = untwist_delta(ctx.factored_delta(), tau, M)
    untw = Twist(Auto((MatrixLift(tau),)),
                 Deriv((MatrixLiftD(theta_prime), Inner(u_prime))))
    bad = _agree_on_samples(untw.delta, twist1.delta, M, rng, trials)
    stage("untwist-delta", {"u_prime": u_prime.to_json(), "theta_prime": theta_prime.to_json()},
          "M(theta') + d_{M(tau),u'} = M(theta) + d_{M(tau),u}; val(u') >= 1",
          bad is None and u_prime.vlow() >= 1, bad)

    twist2 = Twist(Auto((MatrixLift(tau),)), Deriv((MatrixLiftD(theta_prime),)))
    shifted = reparam.Shift(u_prime).new_twist(twist1)
    bad = _agree_on_samples(shifted.delta, twist2.delta, M, rng, trials)
    stage("shift", {"t": u_prime.to_json()},
          "x'' = x' - u' has twist (M(tau), M(theta'))", bad is None, bad)

    dtwist = Twist(tau, theta_prime)
    iso = MatrixIso(M, twist0, b, norm.k, u_prime, tau, theta_prime, twist1, twist2,
                    dtwist, chain)
    got = iso.apply(iso.statement_element())
    stage("transpose", {"n": M.n}, "phi(a' x - t') = y I", got == iso.y_identity(),
          None if got == iso.y_identity() else got.to_json())
    return iso
