"""Weierstrass preparation in D[[y; tau, theta]] and polynomial elements of ideals.

D is Zp or FqSeries, so pi is central in D.  Preparation works on the lifted
representative of the input: all internal arithmetic happens modulo the
two-sided ideal

    J = { sum r_j y^j : (d+1) v(r_j) + j >= (d+1) C },

which sits inside the level-C part of the standard filtration and on which
division by y^d is a contraction.  Every result is then re-verified with
certified series arithmetic (the residual check), so nothing here relies on
the error analysis alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (InsufficientPrecision, NotSolvable, PrecisionError, ReducedDegreeTooHigh,
                     ShapeMismatch)
from .rings import Element, FqSeries, Zp, uniformiser
from .series import SkewSeries
from .twist import Auto

SCHEDULES = ("remainder", "residual")


def _check_base(s):
    if not isinstance(s.ring, (Zp, FqSeries)):
        raise ShapeMismatch(f"Weierstrass preparation needs D = Zp or FqSeries, got {s.ring}")


def lift_series(s, cap):
    """Zero-padded representative of ``s`` at a larger cap (or the same one)."""
    if cap < s.cap:
        return s.truncate(cap)
    coeffs = [c.lift(cap - i) for i, c in enumerate(s.coeffs)]
    return SkewSeries(s.ring, s.twist, cap, coeffs)


# -- pi-normality ----------------------------------------------------------------------

def _pi_rows(twist, R, cap):
    """rows[i][j] = coefficient of y^j in y^i pi, for i < cap."""
    row = [uniformiser(R)]
    rows = [row]
    for _ in range(1, cap):
        nxt = [twist.delta.apply(row[0])]
        for k in range(1, len(row)):
            nxt.append(twist.sigma.apply(row[k - 1]) + twist.delta.apply(row[k]))
        nxt.append(twist.sigma.apply(row[-1]))
        row = nxt
        rows.append(row)
    return rows


def right_divide_pi(r):
    """Solve s pi = r; the answer is known to cap r.cap - 1.

    The coefficient of y^j in s pi is sum_{i >= j} s_i c_ij with c_jj = tau^j(pi)
    and v(c_ij) >= 1 + i - j, so the system is solved from the top degree down.
    """
    _check_base(r)
    C = r.cap
    if C < 1:
        raise PrecisionError("nothing left to divide")
    if not r.coeffs[C - 1].is_zero():
        raise NotSolvable(f"top coefficient {r.coeffs[C - 1]!r} is not divisible by pi")
    rows = _pi_rows(r.twist, r.ring, C)
    s = [None] * (C - 1)
    for j in reversed(range(C - 1)):
        X = r.coeffs[j]
        for i in range(j + 1, C - 1):
            X = X - s[i] * rows[i][j]
        unit = rows[j][j].divide_by_uniformiser(1).inverse()
        try:
            q = X.divide_by_uniformiser(1)
        except PrecisionError:
            raise NotSolvable(f"degree {j}: {X!r} is not divisible by pi") from None
        s[j] = q * unit
    return SkewSeries(r.ring, r.twist, C - 1, s)


def pi_normal_conjugate(s):
    """s' with pi s = s' pi; one level of precision is spent on the division."""
    pi = uniformiser(s.ring)
    return right_divide_pi(pi * s)


def left_divide_pi(s, m):
    """pi^-m s, coefficientwise (pi is a scalar on the left)."""
    return SkewSeries(s.ring, s.twist, s.cap - m,
                      [c.divide_by_uniformiser(m) for c in s.coeffs[:s.cap - m]])


def depolarize(r):
    """(s, m) with s pi^m = r and some coefficient of s a unit."""
    _check_base(r)
    vals = [c.val() for c in r.coeffs]
    certified = [v.value for v in vals if v.exact and not v.is_infinite]
    if not certified:
        raise InsufficientPrecision("every coefficient vanishes at its precision; "
                                    "the pi-adic content cannot be certified")
    m = min(certified)
    s = r
    for _ in range(m):
        s = right_divide_pi(s)
    if not any(c.val() == 0 for c in s.coeffs):
        raise InsufficientPrecision(f"no unit coefficient below cap {s.cap} after dividing by pi^{m}")
    return s, m


# -- arithmetic modulo J ------------------------------------------------------------------

def _raw_map(f, R):
    if getattr(f, "raw_ok", False):
        return lambda x, k: f.raw(R, x, k)

    def go(x, k):
        y = f.apply(Element(R, x, k))
        if y.prec < k and not y.exact:
            raise PrecisionError(f"{f} loses precision at level {k}")
        return R.reduce(y.data, k)
    return go


class _Weighted:
    """Series over D modulo J for a fixed reduced degree d and cap C."""

    def __init__(self, twist, R, C, d):
        w = d + 1
        self.R, self.C, self.d = R, C, d
        self.L = w * C
        self.lev = [C - j // w for j in range(self.L)]
        self.sig = _raw_map(twist.sigma, R)
        self.dlt = _raw_map(twist.delta, R)
        inv = twist.sigma.inverse()
        self.sig_inv_d = _raw_map(Auto(inv.steps * d), R)

    def zero(self):
        return [self.R.zero_raw(l) for l in self.lev]

    def from_series(self, s):
        out = self.zero()
        for j, c in enumerate(s.coeffs[:self.L]):
            out[j] = self.R.reduce(c.data, self.lev[j])
        return out

    def y_power(self, n):
        out = self.zero()
        out[n] = self.R.one_raw(self.lev[n])
        return out

    def pad(self, h):
        """A split quotient (known to lev[k + d]) as a representative modulo J."""
        R, lev = self.R, self.lev
        return [R.reduce(x, lev[k]) for k, x in enumerate(h)] + \
            [R.zero_raw(lev[k]) for k in range(len(h), self.L)]

    def add(self, a, b):
        R = self.R
        return [R.add(x, y, l) for x, y, l in zip(a, b, self.lev)]

    def sub(self, a, b):
        R = self.R
        return [R.sub(x, y, l) for x, y, l in zip(a, b, self.lev)]

    def neg(self, a):
        R = self.R
        return [R.neg(x, l) for x, l in zip(a, self.lev)]

    def nonzero(self, a):
        val = self.R.val
        return [val(x, l) is not None for x, l in zip(a, self.lev)]

    def is_zero(self, a):
        return not any(self.nonzero(a))

    def mul(self, a, b):
        R, lev, L = self.R, self.lev, self.L
        sig, dlt, add, mul, val = self.sig, self.dlt, R.add, R.mul, R.val
        acc = self.zero()
        nz = self.nonzero(a)
        last = max((i for i, f in enumerate(nz) if f), default=-1)
        pushed = list(b)
        live = max((k for k, x in enumerate(pushed) if val(x, lev[k]) is not None), default=-1)
        for i in range(last + 1):
            if i:
                # y * (sum p_k y^k): sigma moves up a degree, delta stays
                top = min(live + 1, L - 1)
                nxt = [dlt(pushed[0], lev[0])]
                for k in range(1, top + 1):
                    l = lev[k]
                    nxt.append(add(sig(pushed[k - 1], l), dlt(pushed[k], l), l))
                pushed = nxt + [R.zero_raw(lev[k]) for k in range(top + 1, L)]
                live = top
            if not nz[i]:
                continue
            ai = a[i]
            for k in range(live + 1):
                l = lev[k]
                pk = pushed[k]
                if val(pk, l) is not None:
                    acc[k] = add(acc[k], mul(ai, pk, l), l)
        return acc

    def inverse(self, a):
        """Two-sided inverse of a unit by Newton iteration (the quotient is finite)."""
        R = self.R
        b = self.zero()
        b[0] = R.inv(R.reduce(a[0], self.C), self.C)
        one = self.y_power(0)
        for _ in range(2 * self.L.bit_length() + 2):
            err = self.sub(one, self.mul(a, b))
            if self.is_zero(err):
                return b
            b = self.add(b, self.mul(b, err))
        raise PrecisionError("unit inversion modulo J did not converge")

    def _expand_yd(self, x, level):
        """Coefficients of y^d x for a scalar x, as a list of length d + 1."""
        R, sig, dlt = self.R, self.sig, self.dlt
        c = [R.reduce(x, level)]
        for _ in range(self.d):
            nxt = [dlt(c[0], level)]
            for l in range(1, len(c)):
                nxt.append(R.add(sig(c[l - 1], level), dlt(c[l], level), level))
            nxt.append(sig(c[-1], level))
            c = nxt
        return c

    def split(self, g):
        """g = lo + y^d h with lo of degree < d; returns (lo, h).

        h_k is known to level lev[k + d]; it is solved from the top degree down
        because y^d h_k also feeds degrees below k + d through delta.
        """
        R, lev, L, d = self.R, self.lev, self.L, self.d
        n = L - d
        h = [None] * n
        E = [None] * n
        for k in reversed(range(n)):
            j = k + d
            lj = lev[j]
            X = R.reduce(g[j], lj)
            for l in range(d):
                kp = j - l
                if kp < n:
                    X = R.sub(X, E[kp][l], lj)
            h[k] = self.sig_inv_d(X, lj)
            E[k] = self._expand_yd(h[k], lev[k])
        lo = []
        for i in range(d):
            li = lev[i]
            X = R.reduce(g[i], li)
            for k in range(min(i, n - 1) + 1):
                X = R.sub(X, E[k][i - k], li)
            lo.append(X)
        return lo, h


def _divide_remainder(W, s_raw):
    """Schedule 'remainder': track the remainder g and accumulate the quotients."""
    s_lo, w = W.split(s_raw)
    w_inv = W.inverse(W.pad(w))
    lo_part = W.zero()
    for i, c in enumerate(s_lo):
        lo_part[i] = c
    rho = [W.R.zero_raw(W.lev[i]) for i in range(W.d)]
    H = W.zero()
    g = W.y_power(W.d)
    for _ in range(W.C + 2):
        lo, h = W.split(g)
        rho = [W.R.add(a, b, W.lev[i]) for i, (a, b) in enumerate(zip(rho, lo))]
        hp = W.pad(h)
        if W.is_zero(hp):
            return rho, W.mul(w_inv, H)
        H = W.add(H, hp)
        g = W.neg(W.mul(lo_part, W.mul(w_inv, hp)))
    raise PrecisionError("Weierstrass division did not converge")


def _divide_residual(W, s_raw):
    """Schedule 'residual': recompute e = y^d - s q from scratch at every step."""
    _, w = W.split(s_raw)
    w_inv = W.inverse(W.pad(w))
    q = W.zero()
    q[0] = w_inv[0]
    yd = W.y_power(W.d)
    for _ in range(W.C + 2):
        e = W.sub(yd, W.mul(s_raw, q))
        lo, h = W.split(e)
        hp = W.pad(h)
        if W.is_zero(hp):
            return lo, q
        q = W.add(q, W.mul(w_inv, hp))
    raise PrecisionError("Weierstrass division did not converge")


# -- preparation ---------------------------------------------------------------------------

@dataclass
class PreparedForm:
    """s = P u modulo level ``cap``, P monic of degree d with lower coefficients in pi D."""

    P: SkewSeries
    u: SkewSeries
    m: int
    d: int
    cap: int
    schedule: str = "remainder"

    def residual(self, s):
        return s - self.P * self.u

    def agrees(self, other):
        return (self.d == other.d and self.m == other.m and self.P == other.P
                and self.u == other.u)

    def to_json(self):
        return {"P": self.P.to_json(), "u": self.u.to_json(), "m": self.m, "d": self.d,
                "cap": self.cap, "schedule": self.schedule,
                "residual_level": self.cap}


def reduced_degree(s):
    """First index whose coefficient is a unit, or None below the cap."""
    for i, c in enumerate(s.coeffs):
        if c.val() == 0:
            return i
    return None


def is_distinguished(P, d):
    """Degree-d coefficient a unit, lower ones in pi D, higher ones zero."""
    for i, c in enumerate(P.coeffs):
        if i < d and not c.vlow() >= 1:
            return False
        if i == d and c.val() != 0:
            return False
        if i > d and not c.is_zero():
            return False
    return True


def prepare(s, schedule="remainder", m=0):
    """Factor s = P u with P distinguished (monic) of degree d and u a unit."""
    _check_base(s)
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}; expected one of {SCHEDULES}")
    R, tw, C = s.ring, s.twist, s.cap
    d = reduced_degree(s)
    if d is None:
        raise ReducedDegreeTooHigh(f"no unit coefficient below cap {C}; "
                                   f"the reduced degree is not visible at this precision")
    if d == 0:
        return PreparedForm(SkewSeries.one(R, tw, C), s, m, 0, C, schedule)
    W = _Weighted(tw, R, C, d)
    s_raw = W.from_series(s)
    run = _divide_remainder if schedule == "remainder" else _divide_residual
    rho, q = run(W, s_raw)
    P_coeffs = [Element(R, R.neg(x, C), C) for x in rho] + [R.one()]
    P = SkewSeries(R, tw, C, P_coeffs)
    q_series = SkewSeries(R, tw, C, [Element(R, R.reduce(q[j], C - j), C - j) for j in range(C)])
    u = q_series.inverse()
    form = PreparedForm(P, u, m, d, C, schedule)
    if not form.residual(s).is_zero():
        raise PrecisionError("prepared form failed its residual check")
    return form


def prepare_element(r, schedule="remainder"):
    """depolarize + prepare: r = P u pi^m modulo the cap of r."""
    s, m = depolarize(r)
    return prepare(s, schedule=schedule, m=m)


# -- polynomial elements of ideals --------------------------------------------------------

@dataclass
class PolynomialWitness:
    """element = generator * multiplier (right ideal) at the generator's cap."""

    element: SkewSeries
    generator: SkewSeries
    multiplier: SkewSeries
    form: PreparedForm

    @property
    def degree(self):
        return self.element.degree()

    def verify(self):
        return (self.generator * self.multiplier - self.element).is_zero()

    def to_json(self):
        return {"element": self.element.to_json(), "multiplier": self.multiplier.to_json(),
                "d": self.form.d, "m": self.form.m, "degree": self.degree,
                "verified": self.verify()}


def _pi_power(R, m):
    return uniformiser(R) ** m


def polynomial_in_right_ideal(r, schedule="remainder"):
    """A nonzero polynomial P pi^m in r D[[y]], with the multiplier w: r w = P pi^m.

    r = P u pi^m and u pi^m = pi^m u' by normality, so w = u'^-1 = pi^-m u^-1 pi^m.
    """
    N = r.cap
    form = prepare_element(r, schedule)
    m = form.m
    pim = _pi_power(r.ring, m)
    P_hat = lift_series(form.P, N)
    element = P_hat * SkewSeries.constant(pim, r.twist, N)
    u_inv = lift_series(form.u.inverse(), N)
    X = u_inv * SkewSeries.constant(pim, r.twist, N)
    w = lift_series(left_divide_pi(X, m), N)
    wit = PolynomialWitness(element, r, w, form)
    if not wit.verify():
        raise PrecisionError("membership certificate r w = P pi^m failed to re-verify")
    return wit


@dataclass
class TwoSidedWitness:
    """element = sum_k left[k] * generator * right[k] in O[[x; sigma, delta]]."""

    element: SkewSeries
    generator: SkewSeries
    left: list
    right: list
    entry: tuple
    scalar: PolynomialWitness = field(repr=False, default=None)

    @property
    def degree(self):
        return self.element.degree()

    def verify(self):
        total = None
        for a, b in zip(self.left, self.right):
            t = a * self.generator * b
            total = t if total is None else total + t
        return (total - self.element).is_zero()

    def to_json(self):
        return {"element": self.element.to_json(), "entry": list(self.entry),
                "left": [a.to_json() for a in self.left],
                "right": [b.to_json() for b in self.right],
                "degree": self.degree, "verified": self.verify()}


def _unit_matrix_series(iso, i, j, s=None):
    """E_ij (times the scalar series s) as a matrix of series over D."""
    from .untwist import MatrixSeries
    n = iso.ring.n
    D = iso.ring.inner
    cap = iso.ring.N
    z = SkewSeries.zero(D, iso.dtwist, cap)
    one = SkewSeries.one(D, iso.dtwist, cap)
    fill = one if s is None else s
    return MatrixSeries([[fill if (a, b) == (i, j) else z for b in range(n)] for a in range(n)])


def polynomial_in_two_sided_ideal_matrix(r, iso, schedule="remainder"):
    """A nonzero polynomial (in x) element of the two-sided ideal generated by r.

    phi(r) has a nonzero entry rho_ij; E_1i phi(r) E_j1 = rho_ij E_11, and the
    scalar witness p = rho_ij w gives p I = sum_k E_ki phi(r) (w E_jk).  Pulling
    back through phi keeps p I polynomial because phi^-1(y I) = a x - t.
    """
    from .untwist import MatrixSeries
    if r.cap != iso.ring.N:
        raise PrecisionError(f"generator cap {r.cap} differs from the ring cap {iso.ring.N}")
    rho = iso.apply(r)
    n = rho.n
    best = None
    for i in range(n):
        for j in range(n):
            e = rho.entries[i][j]
            vals = [c.val() for c in e.coeffs]
            cert = [v.value for v in vals if v.exact and not v.is_infinite]
            if cert and (best is None or min(cert) < best[0]):
                best = (min(cert), i, j)
    if best is None:
        raise InsufficientPrecision("phi(r) vanishes at this precision")
    _, i, j = best
    scalar = polynomial_in_right_ideal(rho.entries[i][j], schedule)
    p = scalar.element
    pI = MatrixSeries.scalar(p, n)
    element = iso.unapply(pI)
    deg = scalar.form.d
    for c in element.coeffs[deg + 1:]:
        if not c.is_zero():
            raise PrecisionError("pull-back of P I is not polynomial of the expected degree")
    left = [iso.unapply(_unit_matrix_series(iso, k, i)) for k in range(n)]
    right = [iso.unapply(_unit_matrix_series(iso, j, k, scalar.multiplier)) for k in range(n)]
    wit = TwoSidedWitness(element, r, left, right, (i, j), scalar)
    if not wit.verify():
        raise PrecisionError("two-sided membership certificate failed to re-verify")
    return wit
