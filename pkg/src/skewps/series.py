"""Truncated skew power series R[[x; sigma, delta]].

A :class:`SkewSeries` at cap N stores coefficients r_0 .. r_{N-1}, with r_i
known modulo filtration level N - i.  This is exactly the class of
sum r_i x^i modulo the level-N part of the standard filtration
f(sum r_i x^i) = min_i (v(r_i) + i).
"""

from __future__ import annotations

from .errors import DescriptorMismatch, NotAUnit, PrecisionError, TwistMismatch
from .level import Level
from .rings import Element, mul_to


def _same_twist(a, b):
    return a is b or a == b


class SkewSeries:
    __slots__ = ("ring", "twist", "cap", "coeffs")

    def __init__(self, ring, twist, cap, coeffs):
        if cap > ring.N:
            raise PrecisionError(f"series cap {cap} exceeds the ring cap {ring.N}")
        coeffs = list(coeffs)[:cap]
        out = []
        for i, c in enumerate(coeffs):
            if isinstance(c, int):
                c = ring.from_int(c)
            if c.ring != ring:
                raise DescriptorMismatch(f"coefficient in {c.ring}, expected {ring}")
            need = cap - i
            if c.prec < need and not c.exact:
                raise PrecisionError(f"coefficient {i} known to level {c.prec}, "
                                     f"needs {need} for cap {cap}")
            out.append(c if c.prec == need else c.reduce(need))
        for i in range(len(out), cap):
            out.append(ring.zero(cap - i))
        self.ring = ring
        self.twist = twist
        self.cap = cap
        self.coeffs = tuple(out)

    # -- constructors -----------------------------------------------------------------
    @classmethod
    def zero(cls, ring, twist, cap=None):
        return cls(ring, twist, ring.N if cap is None else cap, [])

    @classmethod
    def one(cls, ring, twist, cap=None):
        return cls.constant(ring.one(), twist, cap)

    @classmethod
    def constant(cls, r, twist, cap=None):
        return cls(r.ring, twist, r.ring.N if cap is None else cap, [r])

    @classmethod
    def variable(cls, ring, twist, cap=None):
        return cls(ring, twist, ring.N if cap is None else cap, [ring.zero(), ring.one()])

    def like(self, coeffs, cap=None):
        return SkewSeries(self.ring, self.twist, self.cap if cap is None else cap, coeffs)

    def with_twist(self, twist):
        """The same coefficient sequence read in another ring (a change of variable)."""
        return SkewSeries(self.ring, twist, self.cap, self.coeffs)

    # -- filtration -------------------------------------------------------------------------
    def val(self):
        """Standard filtration min_i v(r_i) + i, exact below the cap."""
        return Level.min_of(c.val() + i for i, c in enumerate(self.coeffs)).capped(self.cap)

    def coefficient_val(self):
        """min_i v(r_i), ignoring the degree weighting."""
        return Level.min_of(c.val() for c in self.coeffs)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def degree(self):
        """Largest index with a nonzero residue, or -1."""
        for i in range(self.cap - 1, -1, -1):
            if not self.coeffs[i].is_zero():
                return i
        return -1

    def truncate(self, cap):
        if cap > self.cap:
            raise PrecisionError(f"cannot raise cap {self.cap} to {cap}")
        return SkewSeries(self.ring, self.twist, cap,
                          [c.reduce(cap - i) for i, c in enumerate(self.coeffs[:cap])])

    # -- arithmetic ---------------------------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, SkewSeries):
            raise TypeError(f"expected a SkewSeries, got {type(other).__name__}")
        if other.ring != self.ring:
            raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
        if not _same_twist(self.twist, other.twist):
            raise TwistMismatch(f"{self.twist} vs {other.twist}")
        if self.cap != other.cap:
            raise TwistMismatch(f"cap {self.cap} vs {other.cap}")

    def __add__(self, other):
        self._check(other)
        return self.like([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return self.like([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return self.like([-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Element):
            other = SkewSeries(self.ring, self.twist, self.cap, [other])
        self._check(other)
        return sps_mul(self, other)

    def __rmul__(self, r):
        if isinstance(r, int):
            r = self.ring.from_int(r)
        if isinstance(r, Element):
            return scalar_mul(r, self)
        return NotImplemented

    def __pow__(self, n):
        out = SkewSeries.one(self.ring, self.twist, self.cap)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self):
        return sps_invert_unit(self)

    # -- comparison / output ------------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, SkewSeries):
            return NotImplemented
        return (self.ring == other.ring and self.cap == other.cap
                and _same_twist(self.twist, other.twist)
                and all(a.data == b.data for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((self.ring, self.cap, tuple(c.data for c in self.coeffs)))

    def agrees(self, other, cap=None):
        """Coefficientwise agreement modulo level ``cap`` (default: shared cap)."""
        cap = min(self.cap, other.cap) if cap is None else cap
        return all(a.agrees(b, cap - i) for i, (a, b) in
                   enumerate(zip(self.coeffs[:cap], other.coeffs[:cap])))

    def to_json(self):
        return {"cap": self.cap, "coeffs": [c.to_json() for c in self.coeffs]}

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                terms.append(f"{c!r}" + ("" if i == 0 else f"*x^{i}"))
        return (" + ".join(terms) or "0") + f" + O(level {self.cap})"


def x_mul_coeff(twist, r):
    """x * r = sigma(r) x + delta(r); returns (sigma(r), delta(r))."""
    return twist.sigma.apply(r), twist.delta.apply(r)


def _push_x(twist, coeffs, cap):
    """Coefficients of x * (sum c_k x^k) modulo level ``cap``."""
    s, d = twist.sigma, twist.delta
    out = []
    for k in range(cap):
        need = cap - k
        c = d.apply(coeffs[k])
        if k:
            c = s.apply(coeffs[k - 1]) + c
        if c.prec < need and not c.exact:
            raise PrecisionError(f"pushing x through degree {k}: result known to level "
                                 f"{c.prec}, needs {need}; delta loses precision")
        out.append(c if c.prec == need else c.reduce(need))
    return out


def sps_mul(a, b):
    """Product modulo level N by pushing x through b one power at a time."""
    tw = a.twist
    if tw.sigma.raw_ok and tw.delta.raw_ok:
        return _mul_raw(a, b)
    return _mul_elements(a, b)


def _mul_elements(a, b):
    """Element-level product with per-operation precision tracking."""
    cap, ring = a.cap, a.ring
    last = max((i for i, c in enumerate(a.coeffs) if not c.is_zero()), default=-1)
    # truncated zeros: a product of truncated data never certifies an exact zero
    acc = [Element(ring, ring.zero_raw(cap - k), cap - k) for k in range(cap)]
    pushed = list(b.coeffs)
    for i in range(last + 1):
        if i:
            pushed = _push_x(a.twist, pushed, cap)
        ai = a.coeffs[i]
        if ai.is_zero():
            continue
        for k in range(cap):
            pk = pushed[k]
            if not pk.is_zero():
                acc[k] = acc[k] + mul_to(ai, pk, cap - k)
    for k, c in enumerate(acc):
        if c.prec < cap - k and not c.exact:
            raise PrecisionError(f"product coefficient {k} known to level {c.prec}, "
                                 f"needs {cap - k}")
    return a.like(acc)


def _mul_raw(a, b):
    """Same product on raw payloads.

    Every raw twist primitive preserves precision, so pushed[k] is known modulo
    cap - k.  The only place the jagged bound needs a valuation is a_i * pushed[k]
    with i > k, where a_i is known modulo cap - i only; there v(pushed[k]) >= i - k
    is checked explicitly.
    """
    R, cap = a.ring, a.cap
    s, d = a.twist.sigma, a.twist.delta
    add, val = R.add, R.val
    terms = [([], []) for _ in range(cap)]
    pushed = [c.data for c in b.coeffs]
    nonzero = [not c.is_zero() for c in a.coeffs]
    last = max((i for i, nz in enumerate(nonzero) if nz), default=-1)
    for i in range(last + 1):
        if i:
            nxt = [d.raw(R, pushed[0], cap)]
            for k in range(1, cap):
                need = cap - k
                nxt.append(add(s.raw(R, pushed[k - 1], need), d.raw(R, pushed[k], need), need))
            pushed = nxt
        if not nonzero[i]:
            continue
        ai = a.coeffs[i].data
        for k in range(cap):
            need = cap - k
            pk = pushed[k]
            v = val(pk, need)
            if v is None:
                continue
            if k < i and v < i - k:
                raise PrecisionError(f"x^{i} pushed to degree {k} has valuation {v} < {i - k}; "
                                     f"the twist is not compatible")
            terms[k][0].append(ai)
            terms[k][1].append(pk)
    return a.like([Element(R, R.dot(xs, ys, cap - k), cap - k)
                   for k, (xs, ys) in enumerate(terms)])


def scalar_mul(r, s):
    return s.like([mul_to(r, c, s.cap - i) for i, c in enumerate(s.coeffs)])


def sps_add(a, b):
    return a + b


def sps_val(s):
    return s.val()


def sps_invert_unit(a):
    """Two-sided inverse of a unit series by Newton iteration b <- b + b(1 - ab)."""
    if a.val().value != 0:
        raise NotAUnit("series has positive filtration value")
    try:
        r0inv = a.coeffs[0].lift(a.ring.N).inverse() if a.coeffs[0].prec < a.ring.N \
            else a.coeffs[0].inverse()
    except NotAUnit:
        raise NotAUnit("constant coefficient is not a unit") from None
    one = SkewSeries.one(a.ring, a.twist, a.cap)
    b = a.like([r0inv])
    for _ in range(a.cap + 1):
        err = one - a * b
        if err.is_zero():
            break
        b = b + b * err
    else:
        raise PrecisionError("Newton iteration did not converge")
    if not (b * a - one).is_zero():
        raise NotAUnit("right inverse is not a left inverse")
    return b
