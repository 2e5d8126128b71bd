"""Witness descriptors for automorphisms sigma and sigma-derivations delta.

An :class:`Auto` is a composition of primitive automorphisms, written and
applied like function composition: ``Auto((f, g))`` is ``f o g``, so ``g``
acts first.  A :class:`Deriv` is a sum of primitive derivations.  Inner
derivations ``d_{sigma,t}(r) = t r - sigma(r) t`` need to know their sigma;
:class:`Twist` binds any unbound ones to its own sigma at construction.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .errors import ShapeMismatch
from .rings import Element, FqSeries, Matrix, Product, Zp, mul_to


# -- automorphisms ----------------------------------------------------------------

@dataclass(frozen=True)
class Auto:
    steps: Tuple = ()

    def apply(self, r):
        for s in reversed(self.steps):
            r = s.apply(r)
        return r

    def inverse(self):
        return Auto(tuple(s.inverse() for s in reversed(self.steps)))

    def raw(self, R, x, k):
        """Apply to a raw payload known modulo level k (precision-preserving steps only).

        Results are memoised per (ring, payload): the same coefficient is usually
        pushed through sigma and through delta's own copy of sigma.
        """
        if not self.steps:
            return R.reduce(x, k)
        memo = self.__dict__.get("_memo")
        if memo is None or len(memo) > 20000:
            memo = {}
            object.__setattr__(self, "_memo", memo)
        key = (R, x)
        hit = memo.get(key)
        if hit is not None and hit[0] >= k:
            return hit[1] if hit[0] == k else R.reduce(hit[1], k)
        y = x
        for s in reversed(self.steps):
            y = s.raw(R, y, k)
        memo[key] = (k, y)
        return y

    @functools.cached_property
    def raw_ok(self):
        return all(getattr(s, "raw_ok", False) for s in self.steps)

    def compose(self, other):
        """self o other."""
        return Auto(self.steps + other.steps)

    @property
    def is_identity(self):
        return not self.steps

    def to_json(self):
        return [s.to_json() for s in self.steps]

    def __str__(self):
        return " o ".join(str(s) for s in self.steps) or "id"


IDENTITY = Auto()


def auto(*steps):
    return Auto(tuple(steps))


@functools.lru_cache(maxsize=None)
def _frobenius_table(q, e):
    from .fields import gf
    F = gf(q)
    return tuple(F.frobenius(c, e) for c in range(q))


@dataclass(frozen=True)
class FrobeniusPow:
    """Raise every F_q coefficient to the p^e-th power; pi is fixed."""

    e: int

    def apply(self, r):
        R = r.ring
        if isinstance(R, Zp):
            return r
        if not isinstance(R, FqSeries):
            raise ShapeMismatch(f"Frobenius does not act on {R}")
        F = R.field
        return Element(R, tuple(F.frobenius(c, self.e) for c in r.data), r.prec, r.exact)

    def inverse(self):
        return FrobeniusPow(-self.e)

    raw_ok = True

    def raw(self, R, x, k):
        if isinstance(R, Zp):
            return R.reduce(x, k)
        table = _frobenius_table(R.q, self.e)
        return tuple(table[c] for c in R.reduce(x, k))

    def to_json(self):
        return {"frob": self.e}

    def __str__(self):
        return f"frob^{self.e}"


@dataclass(frozen=True)
class ScaleUniformiser:
    """pi -> u pi on F_q[[pi]] for a unit u; F_q-coefficients are fixed."""

    u: Element

    def _check(self, r):
        if r.ring != self.u.ring or not isinstance(r.ring, FqSeries):
            raise ShapeMismatch(f"uniformiser scaling by an element of {self.u.ring} "
                                f"does not act on {r.ring}")

    @functools.cached_property
    def _powers(self):
        """Raw (u pi)^j for j < N, at full precision."""
        R = self.u.ring
        N = R.N
        upi = R.reduce((0,) + tuple(self.u.data), N)
        out = [R.one_raw(N)]
        for _ in range(1, N):
            out.append(R.mul(out[-1], upi, N))
        return out

    def _apply_raw(self, R, c, k):
        F = R.field
        M, A = F.mul, F.add
        out = [0] * k
        for j, cj in enumerate(c[:k]):
            if cj:
                row = M[cj]
                pj = self._powers[j]
                for i in range(j, k):
                    b = pj[i]
                    if b:
                        out[i] = A[out[i]][row[b]]
        return tuple(out)

    def apply(self, r):
        self._check(r)
        if r.exact:
            return r
        return Element(r.ring, self._apply_raw(r.ring, r.data, r.prec), r.prec)

    def preimage(self, g):
        """Solve sigma(s) = g degree by degree (the map is triangular)."""
        self._check(g)
        R, k = g.ring, g.prec
        F = R.field
        u0 = self.u.data[0]
        s = [0] * k
        for i in range(k):
            img = self._apply_raw(R, tuple(s), k)
            resid = F.sub(g.data[i], img[i])
            s[i] = F.mul[resid][F.inv[F.power(u0, i)]]
        return Element(R, tuple(s), k)

    def inverse(self):
        return ScaleUniformiser(self.preimage(self.u.inverse()))

    @property
    def raw_ok(self):
        return self.u.prec == self.u.ring.N

    def raw(self, R, x, k):
        return self._apply_raw(R, x, k)

    def to_json(self):
        return {"scale": self.u.to_json()}

    def __str__(self):
        return f"scale({self.u!r})"


@dataclass(frozen=True)
class Conjugation:
    """c_a(r) = a r a^-1.

    A witness ``a`` of positive valuation is accepted: it is split as
    a = pi~^k b with b a unit and c_a is evaluated as c_b (pi~ is central in
    every supported ring).  Witness payloads are taken as exact literals.
    """

    a: Element

    @functools.cached_property
    def split(self):
        a = self.a
        if a.vlow() == 0:
            return a, 0
        raw, k = a.ring.split_uniformiser(a.data, a.prec)
        return Element(a.ring, raw, a.prec), k

    @functools.cached_property
    def b_inv(self):
        return self.split[0].inverse()

    def apply(self, r):
        if r.ring != self.a.ring:
            raise ShapeMismatch(f"conjugation in {self.a.ring} applied to {r.ring}")
        if r.exact:
            return r
        k = r.prec
        return mul_to(mul_to(self.split[0], r, k), self.b_inv, k)

    def inverse(self):
        return Conjugation(self.b_inv)

    @property
    def raw_ok(self):
        return self.a.prec == self.a.ring.N

    def raw(self, R, x, k):
        return R.mul(R.mul(self.split[0].data, x, k), self.b_inv.data, k)

    def to_json(self):
        return {"conj": self.a.to_json()}

    def __str__(self):
        return f"c[{self.a!r}]"


@dataclass(frozen=True)
class MatrixLift:
    """M_n(tau): apply an automorphism of the entry ring entrywise."""

    inner: Auto

    def apply(self, r):
        M = r.ring
        if not isinstance(M, Matrix):
            raise ShapeMismatch(f"matrix lift applied to {M}")
        if r.exact:
            return r
        n = M.n
        return M.from_entries([[self.inner.apply(M.entry(r, i, j)) for j in range(n)]
                               for i in range(n)])

    def inverse(self):
        return MatrixLift(self.inner.inverse())

    @property
    def raw_ok(self):
        return self.inner.raw_ok

    def raw(self, R, x, k):
        inner, f = R.inner, self.inner
        return tuple(tuple(f.raw(inner, e, k) for e in row) for row in x)

    def to_json(self):
        return {"matlift": self.inner.to_json()}

    def __str__(self):
        return f"M({self.inner})"


@dataclass(frozen=True)
class FactorPermutation:
    """sigma(A_i) = A_perm[i] on a product ring."""

    perm: Tuple[int, ...]

    def apply(self, r):
        P = r.ring
        if not isinstance(P, Product) or len(self.perm) != len(P.factors):
            raise ShapeMismatch(f"permutation {self.perm} does not act on {P}")
        parts = [None] * len(self.perm)
        for i, j in enumerate(self.perm):
            if P.factors[i] != P.factors[j]:
                raise ShapeMismatch(f"factors {i} and {j} differ")
            parts[j] = P.part(r, i)
        return P.from_parts(parts)

    raw_ok = True

    def raw(self, R, x, k):
        out = [None] * len(self.perm)
        for i, j in enumerate(self.perm):
            out[j] = R.factors[i].reduce(x[i], k)
        return tuple(out)

    def inverse(self):
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return FactorPermutation(tuple(inv))

    def to_json(self):
        return {"perm": list(self.perm)}

    def __str__(self):
        return f"perm{self.perm}"


@dataclass(frozen=True)
class Componentwise:
    """Independent automorphisms on each factor of a product ring."""

    autos: Tuple[Auto, ...]

    def apply(self, r):
        P = r.ring
        if not isinstance(P, Product) or len(self.autos) != len(P.factors):
            raise ShapeMismatch(f"componentwise twist does not act on {P}")
        return P.from_parts([a.apply(P.part(r, i)) for i, a in enumerate(self.autos)])

    def inverse(self):
        return Componentwise(tuple(a.inverse() for a in self.autos))

    @property
    def raw_ok(self):
        return all(a.raw_ok for a in self.autos)

    def raw(self, R, x, k):
        return tuple(a.raw(f, xi, k) for a, f, xi in zip(self.autos, R.factors, x))

    def to_json(self):
        return {"componentwise": [a.to_json() for a in self.autos]}

    def __str__(self):
        return "(" + " x ".join(str(a) for a in self.autos) + ")"


# -- derivations -------------------------------------------------------------------

@dataclass(frozen=True)
class Deriv:
    terms: Tuple = ()

    def apply(self, r):
        out = r.ring.zero()
        for t in self.terms:
            out = out + t.apply(r)
        return out

    def bind(self, sigma):
        return Deriv(tuple(t.bind(sigma) for t in self.terms))

    def raw(self, R, x, k):
        out = None
        for t in self.terms:
            y = t.raw(R, x, k)
            out = y if out is None else R.add(out, y, k)
        return R.zero_raw(k) if out is None else out

    @functools.cached_property
    def raw_ok(self):
        return all(getattr(t, "raw_ok", False) for t in self.terms)

    def certified(self):
        """True when compatibility follows structurally from the witnesses."""
        return all(t.certified() for t in self.terms)

    def __add__(self, other):
        return Deriv(self.terms + other.terms)

    @property
    def is_zero(self):
        return not self.terms

    def to_json(self):
        return [t.to_json() for t in self.terms]

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) or "0"


ZERO = Deriv()


def deriv(*terms):
    return Deriv(tuple(terms))


@dataclass(frozen=True)
class Inner:
    """d_{sigma,t}(r) = t r - sigma(r) t."""

    t: Element
    sigma: Optional[Auto] = None

    def apply(self, r):
        if self.sigma is None:
            raise ValueError("inner derivation is not bound to an automorphism")
        if r.exact:
            return r
        t = self.t
        k = min(r.ring.N, r.prec + self._tv)
        return mul_to(t, r, k) - mul_to(self.sigma.apply(r), t, k)

    @functools.cached_property
    def _tv(self):
        v = self.t.vlow()
        return self.t.ring.N if v == float("inf") else v

    def bind(self, sigma):
        return self if self.sigma is not None else Inner(self.t, sigma)

    @property
    def raw_ok(self):
        return (self.sigma is not None and self.t.prec == self.t.ring.N
                and self.sigma.raw_ok)

    def raw(self, R, x, k):
        t = self.t.data
        return R.sub(R.mul(t, x, k), R.mul(self.sigma.raw(R, x, k), t, k), k)

    def certified(self):
        return self.t.vlow() >= 1

    def to_json(self):
        out = {"inner": self.t.to_json()}
        if self.sigma is not None:
            out["sigma"] = self.sigma.to_json()
        return out

    def __str__(self):
        return f"d[{self.t!r}]"


@dataclass(frozen=True)
class MatrixLiftD:
    """M_n(theta): apply a derivation of the entry ring entrywise."""

    inner: Deriv

    def apply(self, r):
        M = r.ring
        if not isinstance(M, Matrix):
            raise ShapeMismatch(f"matrix lift applied to {M}")
        if r.exact or self.inner.is_zero:
            return M.zero()
        n = M.n
        return M.from_entries([[self.inner.apply(M.entry(r, i, j)) for j in range(n)]
                               for i in range(n)])

    def bind(self, sigma):
        tau = None
        if sigma.is_identity:
            tau = IDENTITY
        elif len(sigma.steps) == 1 and isinstance(sigma.steps[0], MatrixLift):
            tau = sigma.steps[0].inner
        return self if tau is None else MatrixLiftD(self.inner.bind(tau))

    @property
    def raw_ok(self):
        return self.inner.raw_ok

    def raw(self, R, x, k):
        inner, f = R.inner, self.inner
        return tuple(tuple(f.raw(inner, e, k) for e in row) for row in x)

    def certified(self):
        return self.inner.certified()

    def to_json(self):
        return {"matlift": self.inner.to_json()}

    def __str__(self):
        return f"M({self.inner})"


@dataclass(frozen=True)
class LeftMultiple:
    """r -> a * inner(r); a (c_a sigma)-derivation when inner is a sigma-derivation."""

    a: Element
    inner: Deriv

    def apply(self, r):
        if r.exact:
            return r
        return self.a * self.inner.apply(r)

    def bind(self, sigma):
        # inner is a derivation for c_a^-1 o sigma
        base = Auto((Conjugation(self.a).inverse(),)).compose(sigma)
        return LeftMultiple(self.a, self.inner.bind(base))

    @property
    def raw_ok(self):
        return self.a.prec == self.a.ring.N and self.inner.raw_ok

    def raw(self, R, x, k):
        return R.mul(self.a.data, self.inner.raw(R, x, k), k)

    def certified(self):
        return self.inner.certified()

    def to_json(self):
        return {"leftmul": self.a.to_json(), "delta": self.inner.to_json()}

    def __str__(self):
        return f"{self.a!r}*({self.inner})"


@dataclass(frozen=True)
class TauTimes:
    """r -> t (r - tau(r)); equals d_{tau,t} on a commutative ring."""

    t: Element
    tau: Optional[Auto] = None

    def apply(self, r):
        if self.tau is None:
            raise ValueError("tau-derivation is not bound to an automorphism")
        if r.exact:
            return r
        return self.t * (r - self.tau.apply(r))

    def bind(self, sigma):
        return self if self.tau is not None else TauTimes(self.t, sigma)

    @property
    def raw_ok(self):
        return self.tau is not None and self.t.prec == self.t.ring.N and self.tau.raw_ok

    def raw(self, R, x, k):
        return R.mul(self.t.data, R.sub(x, self.tau.raw(R, x, k), k), k)

    def certified(self):
        return self.t.vlow() >= 1

    def to_json(self):
        out = {"tau_times": self.t.to_json()}
        if self.tau is not None:
            out["tau"] = self.tau.to_json()
        return out

    def __str__(self):
        return f"{self.t!r}(1-tau)"


@dataclass(frozen=True)
class PiDerivative:
    """Formal d/dpi on F_q[[pi]].  A genuine derivation, but not compatible."""

    def apply(self, r):
        R = r.ring
        if not isinstance(R, FqSeries):
            raise ShapeMismatch(f"d/dpi does not act on {R}")
        if r.exact:
            return r
        F = R.field
        k = r.prec
        out = tuple(F.mul[r.data[i + 1]][(i + 1) % F.p] for i in range(k - 1))
        return Element(R, out, k - 1)

    def bind(self, sigma):
        return self

    def certified(self):
        return False

    def to_json(self):
        return {"dpi": True}

    def __str__(self):
        return "d/dpi"


@dataclass(frozen=True)
class ComponentwiseD:
    derivs: Tuple[Deriv, ...]

    def apply(self, r):
        P = r.ring
        if not isinstance(P, Product) or len(self.derivs) != len(P.factors):
            raise ShapeMismatch(f"componentwise derivation does not act on {P}")
        return P.from_parts([d.apply(P.part(r, i)) for i, d in enumerate(self.derivs)])

    def bind(self, sigma):
        if len(sigma.steps) == 1 and isinstance(sigma.steps[0], Componentwise):
            autos = sigma.steps[0].autos
            return ComponentwiseD(tuple(d.bind(a) for d, a in zip(self.derivs, autos)))
        if sigma.is_identity:
            return ComponentwiseD(tuple(d.bind(IDENTITY) for d in self.derivs))
        return self

    def certified(self):
        return all(d.certified() for d in self.derivs)

    @property
    def raw_ok(self):
        return all(d.raw_ok for d in self.derivs)

    def raw(self, R, x, k):
        return tuple(d.raw(f, xi, k) for d, f, xi in zip(self.derivs, R.factors, x))

    def to_json(self):
        return {"componentwise": [d.to_json() for d in self.derivs]}

    def __str__(self):
        return "(" + " x ".join(str(d) for d in self.derivs) + ")"


@dataclass(frozen=True)
class Twist:
    """Multiplication data (sigma, delta) for x r = sigma(r) x + delta(r)."""

    sigma: Auto = IDENTITY
    delta: Deriv = ZERO

    def __post_init__(self):
        object.__setattr__(self, "delta", self.delta.bind(self.sigma))

    @property
    def precision_gain(self):
        """Certified filtration gain of delta: 1 if structurally compatible, else 0."""
        return 1 if self.delta.certified() else 0

    def to_json(self):
        return {"sigma": self.sigma.to_json(), "delta": self.delta.to_json()}

    def __str__(self):
        return f"(sigma={self.sigma}, delta={self.delta})"


TRIVIAL = Twist()


def apply_sigma(s, r):
    return s.apply(r)


def apply_delta(d, r, sigma=None):
    if sigma is not None:
        d = d.bind(sigma)
    return d.apply(r)


# -- checks ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    passed: bool
    trials: int
    failures: int = 0
    witness: Optional[dict] = None
    certified: Optional[bool] = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        out = {"name": self.name, "passed": self.passed, "trials": self.trials,
               "failures": self.failures, "witness": self.witness}
        if self.certified is not None:
            out["certified"] = self.certified
        if self.details:
            out["details"] = self.details
        return out


def sample_by_level(ring, rng, trials):
    """Elements cycling through every exact valuation level 0..N-1."""
    for i in range(trials):
        yield ring.random(rng, val=i % ring.N)


def check_leibniz(twist, ring, trials=200, seed=0):
    rng = random.Random(f"{seed}/leibniz")
    s, d = twist.sigma, twist.delta
    failures, witness = 0, None
    for _ in range(trials):
        a = ring.random(rng, val=rng.randrange(ring.N))
        b = ring.random(rng, val=rng.randrange(ring.N))
        lhs = d.apply(a * b)
        rhs = d.apply(a) * b + s.apply(a) * d.apply(b)
        if not lhs.agrees(rhs):
            failures += 1
            if witness is None:
                witness = {"r": a.to_json(), "s": b.to_json(),
                           "delta(rs)": lhs.to_json(), "rhs": rhs.to_json()}
    return CheckReport("leibniz", failures == 0, trials, failures, witness)


def check_compatible(twist, ring, trials=200, seed=0):
    """v(sigma(r)) = v(r) and v(delta(r)) > v(r), sampled at every valuation level."""
    rng = random.Random(f"{seed}/compatible")
    s, d = twist.sigma, twist.delta
    failures, witness = 0, None
    trials = max(trials, ring.N)
    for r in sample_by_level(ring, rng, trials):
        v = r.val()
        sv = s.apply(r).val()
        dv = d.apply(r).val()
        bad = None
        if sv != v:
            bad = "sigma changes the valuation"
        elif dv.value <= v.value:
            bad = ("delta does not raise the valuation" if dv.exact
                   else "delta loses too much precision to certify the gain")
        if bad:
            failures += 1
            if witness is None:
                witness = {"r": r.to_json(), "val(r)": v.to_json(),
                           "val(delta(r))": dv.to_json(), "val(sigma(r))": sv.to_json(),
                           "reason": bad}
    return CheckReport("compatible", failures == 0, trials, failures, witness,
                       certified=twist.delta.certified())


def check_sigma_homomorphism(sigma, ring, trials=200, seed=0):
    rng = random.Random(f"{seed}/sigma-hom")
    failures, witness = 0, None
    if not sigma.apply(ring.one()).agrees(ring.one()):
        failures, witness = 1, {"reason": "sigma(1) != 1"}
    inv = sigma.inverse()
    for _ in range(trials):
        a, b = ring.random(rng), ring.random(rng)
        ok = (sigma.apply(a + b).agrees(sigma.apply(a) + sigma.apply(b))
              and sigma.apply(a * b).agrees(sigma.apply(a) * sigma.apply(b))
              and sigma.apply(inv.apply(a)).agrees(a)
              and sigma.apply(a).val() == a.val())
        if not ok:
            failures += 1
            if witness is None:
                witness = {"r": a.to_json(), "s": b.to_json()}
    return CheckReport("sigma-hom", failures == 0, trials, failures, witness)
