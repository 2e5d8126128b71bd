"""Structure constants and changes of variable y = x - t, y = a x.

(x - t)^n = sum_i beta[n][i] x^(n-i)   and   (a x)^n = sum_i gamma[n][i] x^(n-i).

Substitution comes in two flavours.  Series mode works on jagged
:class:`SkewSeries` and needs v(beta[n][i]) >= i (resp. gamma) for the
truncation to be sound.  Polynomial mode works on plain coefficient lists at
full precision and is what the val(t) = 0 counterexample runs in.

Sign conventions are fixed by reading the twist off a product: with y = x - t,
y r = sigma(r) y + (delta(r) - (t r - sigma(r) t)); with y = a x,
y r = (a sigma(r) a^-1) y + a delta(r).
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field

from .errors import HypothesisViolated, NotAUnit, PrecisionError, ValueTooLow
from .level import Level
from .rings import Element
from .series import SkewSeries
from .twist import (CheckReport, Conjugation, Inner, LeftMultiple, Twist, auto,
                    check_compatible, deriv)


# -- tables ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BetaTable:
    t: Element
    rows: tuple

    def __getitem__(self, n):
        return self.rows[n]

    @functools.cached_property
    def vlows(self):
        return [[e.vlow() for e in row] for row in self.rows]

    def min_excess(self):
        """min over entries of v(beta[n][i]) - i; nonnegative means val(beta[n][i]) >= i."""
        return min(e.vlow() - i for row in self.rows for i, e in enumerate(row))

    def to_json(self):
        return {"t": self.t.to_json(), "rows": [[e.to_json() for e in row] for row in self.rows]}


@dataclass(frozen=True)
class GammaTable:
    a: Element
    rows: tuple

    def __getitem__(self, n):
        return self.rows[n]

    @functools.cached_property
    def vlows(self):
        return [[e.vlow() for e in row] for row in self.rows]

    def min_excess(self):
        return min(e.vlow() - i for row in self.rows for i, e in enumerate(row))

    def to_json(self):
        return {"a": self.a.to_json(), "rows": [[e.to_json() for e in row] for row in self.rows]}


def beta_coeffs(twist, t, n_max, unsafe=False):
    """Rows 0..n_max of the (x - t)^n expansion."""
    if t.vlow() < 1 and not unsafe:
        raise ValueTooLow(f"shift needs val(t) >= 1, got {t.val()}")
    s, d = twist.sigma, twist.delta
    R = t.ring
    rows = [(R.one(),)]
    for n in range(n_max):
        prev = rows[-1]
        row = [s.apply(prev[0])]
        for i in range(1, n + 1):
            row.append(s.apply(prev[i]) + d.apply(prev[i - 1]) - t * prev[i - 1])
        row.append(d.apply(prev[n]) - t * prev[n])
        rows.append(tuple(row))
    return BetaTable(t, tuple(rows))


def gamma_coeffs(twist, a, n_max):
    """Rows 0..n_max of the (a x)^n expansion."""
    if a.vlow() != 0:
        raise NotAUnit(f"scaling needs a unit, val(a) = {a.val()}")
    a.inverse()
    s, d = twist.sigma, twist.delta
    R = a.ring
    rows = [(R.one(),)]
    for n in range(n_max):
        prev = rows[-1]
        row = [a * s.apply(prev[0])]
        for i in range(1, n + 1):
            row.append(a * (s.apply(prev[i]) + d.apply(prev[i - 1])))
        row.append(a * d.apply(prev[n]))
        rows.append(tuple(row))
    return GammaTable(a, tuple(rows))


# -- substitution -----------------------------------------------------------------------

def _combine(coeffs, table, cap=None):
    """out[j] = sum_{n >= j} coeffs[n] * table[n][n - j]; jagged when cap is given.

    Each term is certified modulo min(prec(c) + v(T), prec(T) + v(c)); a
    coefficient that cannot reach its required level raises PrecisionError.
    """
    R = coeffs[0].ring
    deg = len(coeffs)
    width = deg if cap is None else min(deg, cap)
    tvals = table.vlows
    out = []
    for j in range(width):
        need = R.N if cap is None else cap - j
        xs, ys = [], []
        for n in range(j, deg):
            c = coeffs[n]
            if c.exact:
                continue
            T = table.rows[n][n - j]
            if T.exact:
                continue
            lvl = need
            if c.prec < lvl:
                lvl = min(lvl, c.prec + tvals[n][n - j])
            if T.prec < lvl:
                lvl = min(lvl, T.prec + c.vlow())
            if lvl < need:
                raise PrecisionError(f"substituted coefficient {j} known to level {lvl}, "
                                     f"needs {need}")
            xs.append(c.data)
            ys.append(T.data)
        out.append(Element(R, R.dot(xs, ys, need), need))
    return out


def substitute_shift(p, t, unsafe=False, table=None):
    """p(x - t) = sum r_n (x - t)^n, re-expanded in powers of x (same twist).

    A precomputed ``table`` for (p.twist, t) may be passed to skip the recurrence.
    """
    if table is None:
        table = beta_coeffs(p.twist, t, p.cap - 1, unsafe=unsafe)
    return p.like(_combine(p.coeffs, table, p.cap))


def substitute_scale(p, a, table=None):
    """p(a x) = sum r_n (a x)^n, re-expanded in powers of x (same twist)."""
    if table is None:
        table = gamma_coeffs(p.twist, a, p.cap - 1)
    return p.like(_combine(p.coeffs, table, p.cap))


def poly_substitute_shift(twist, coeffs, t, unsafe=False):
    """Polynomial mode: coefficient list at full precision, any degree."""
    table = beta_coeffs(twist, t, len(coeffs) - 1, unsafe=unsafe)
    return _combine(coeffs, table)


def poly_substitute_scale(twist, coeffs, a):
    table = gamma_coeffs(twist, a, len(coeffs) - 1)
    return _combine(coeffs, table)


def poly_val(coeffs):
    """min_i v(r_i) + i for a polynomial; no truncation in the degree."""
    return Level.min_of(c.val() + i for i, c in enumerate(coeffs))


def poly_mul(twist, a, b):
    """Product of two skew polynomials given as coefficient lists (oracle use)."""
    R = a[0].ring
    out = [R.zero() for _ in range(len(a) + len(b) - 1)]
    pushed = list(b)
    for i, ai in enumerate(a):
        if i:
            nxt = [twist.delta.apply(pushed[0])]
            for k in range(1, len(pushed)):
                nxt.append(twist.sigma.apply(pushed[k - 1]) + twist.delta.apply(pushed[k]))
            nxt.append(twist.sigma.apply(pushed[-1]))
            pushed = nxt
        for k, c in enumerate(pushed):
            out[k] = out[k] + ai * c
    return out


# -- moves --------------------------------------------------------------------------------

class _PostConjugated:
    """r -> c(d(r)); only used to evaluate the printed form for comparison."""

    def __init__(self, c, d):
        self.c, self.d = c, d

    def apply(self, r):
        return self.c.apply(self.d.apply(r))


def _cached(move, kind, twist, c, n):
    """Tables are immutable, so a move keeps the ones it has built."""
    cache = move.__dict__.setdefault("_tables", {})
    key = (kind, twist, c, n)
    if key not in cache:
        cache[key] = (beta_coeffs(twist, c, n) if kind == "beta"
                      else gamma_coeffs(twist, c, n))
    return cache[key]


@dataclass(frozen=True)
class Shift:
    """y = x - t."""
    t: Element

    def new_twist(self, twist):
        return Twist(twist.sigma, twist.delta + deriv(Inner(-self.t)))

    def printed_twist(self, twist):
        """The closed form delta + d_{sigma,t}."""
        tw = Twist(twist.sigma, twist.delta + deriv(Inner(self.t)))
        return tw.sigma, tw.delta

    def check(self):
        if self.t.vlow() < 1:
            raise HypothesisViolated(f"shift needs val(t) >= 1, got {self.t.val()}")

    def variable(self, twist, cap):
        R = self.t.ring
        return SkewSeries(R, twist, cap, [-self.t, R.one()])

    def to_new(self, s, new_twist):
        """Coordinates in y of the element with x-coordinates s (x = y + t)."""
        table = _cached(self, "beta", new_twist, -self.t, s.cap - 1)
        return substitute_shift(s.with_twist(new_twist), -self.t, table=table)

    def to_old(self, q, old_twist):
        table = _cached(self, "beta", old_twist, self.t, q.cap - 1)
        return substitute_shift(q.with_twist(old_twist), self.t, table=table)

    def degree_one_to_new(self, c0, c1):
        """c0 + c1 x = (c0 + c1 t) + c1 y."""
        return c0 + c1 * self.t, c1

    def to_json(self):
        return {"shift": self.t.to_json()}


@dataclass(frozen=True)
class Scale:
    """y = a x."""
    a: Element

    def new_twist(self, twist):
        return Twist(auto(Conjugation(self.a)).compose(twist.sigma),
                     deriv(LeftMultiple(self.a, twist.delta)) if not twist.delta.is_zero
                     else twist.delta)

    def printed_twist(self, twist):
        """The closed form (c_a sigma, c_a delta)."""
        c = Conjugation(self.a)
        return auto(c).compose(twist.sigma), _PostConjugated(c, twist.delta)

    def check(self):
        if self.a.vlow() != 0:
            raise HypothesisViolated(f"scale needs a unit of val 0, got {self.a.val()}")
        try:
            self.a.inverse()
        except NotAUnit:
            raise HypothesisViolated("scale factor is not invertible") from None

    def variable(self, twist, cap):
        R = self.a.ring
        return SkewSeries(R, twist, cap, [R.zero(), self.a])

    def to_new(self, s, new_twist):
        a_inv = self.a.inverse()
        table = _cached(self, "gamma", new_twist, a_inv, s.cap - 1)
        return substitute_scale(s.with_twist(new_twist), a_inv, table=table)

    def to_old(self, q, old_twist):
        table = _cached(self, "gamma", old_twist, self.a, q.cap - 1)
        return substitute_scale(q.with_twist(old_twist), self.a, table=table)

    def degree_one_to_new(self, c0, c1):
        """c0 + c1 x = c0 + (c1 a^-1) y."""
        return c0, c1 * self.a.inverse()

    def to_json(self):
        return {"scale": self.a.to_json()}


@dataclass
class ChangeOfVariable:
    series: SkewSeries
    twist: Twist
    move: object
    report: dict = field(default_factory=dict)


def read_off_twist(move, twist, r):
    """(sigma'(r), delta'(r)) read from y*r computed in the old ring."""
    R = r.ring
    y = move.variable(twist, R.N)
    yr = y * SkewSeries.constant(r, twist)
    c0, c1 = yr.coeffs[0], yr.coeffs[1]
    d_new, s_new = move.degree_one_to_new(c0, c1)
    return s_new, d_new


def verify_new_twist(move, twist, new_twist, ring, trials=200, seed=0):
    """Compare the descriptor twist with the constructive read-off on samples."""
    rng = random.Random(f"{seed}/read-off")
    failures, witness = 0, None
    printed_failures = 0
    printed = move.printed_twist(twist)
    for i in range(trials):
        r = ring.random(rng, val=i % ring.N)
        s_ro, d_ro = read_off_twist(move, twist, r)
        s_ds, d_ds = new_twist.sigma.apply(r), new_twist.delta.apply(r)
        if not (s_ro.agrees(s_ds) and d_ro.agrees(d_ds)):
            failures += 1
            if witness is None:
                witness = {"r": r.to_json(), "read_off_delta": d_ro.to_json(),
                           "descriptor_delta": d_ds.to_json()}
        ps, pd = printed[0].apply(r), printed[1].apply(r)
        if not (ps.agrees(s_ro) and pd.agrees(d_ro)):
            printed_failures += 1
    return CheckReport("read-off", failures == 0, trials, failures, witness,
                       details={"printed_form_mismatches": printed_failures})


def change_variable(s, move, trials=200, seed=0, check=True):
    """Re-express s in the new variable; the new twist is verified by read-off."""
    move.check()
    twist = s.twist
    new_twist = move.new_twist(twist)
    report = {}
    if check:
        ro = verify_new_twist(move, twist, new_twist, s.ring, trials, seed)
        if not ro.passed:
            raise HypothesisViolated(f"twist read-off disagrees with descriptor: {ro.witness}")
        comp = check_compatible(new_twist, s.ring, trials, seed)
        if not comp.passed:
            raise HypothesisViolated(f"new twist is not compatible: {comp.witness}")
        report = {"read_off": ro.to_json(), "compatible": comp.to_json()}
    return ChangeOfVariable(move.to_new(s, new_twist), new_twist, move, report)


# -- filtration equality -----------------------------------------------------------------

def random_series(ring, twist, cap, rng, max_val=None):
    """A jagged series whose coefficients have spread-out valuations."""
    coeffs = []
    for i in range(cap):
        k = cap - i
        hi = k if max_val is None else min(k, max_val)
        v = rng.randint(0, hi)
        coeffs.append(ring.zero(k) if v >= k else ring.random(rng, val=v, prec=k))
    return SkewSeries(ring, twist, cap, coeffs)


def check_filtration_equality(twist, ring, move, trials=200, seed=0, cap=None):
    """f_x(p) = f_y(p) for sampled p, starting from either coordinate system.

    Also checks the one-sided inequalities f(p(x - t)) >= f(p) (resp. p(ax))
    in both rings.
    """
    cap = ring.N if cap is None else cap
    rng = random.Random(f"{seed}/filtration-equality")
    move.check()
    new_twist = move.new_twist(twist)
    failures, witness = 0, None
    for trial in range(trials):
        p = random_series(ring, twist, cap, rng)
        q = move.to_new(p, new_twist)
        back = move.to_old(q, twist)
        q2 = random_series(ring, new_twist, cap, rng)
        p2 = move.to_old(q2, twist)
        fwd = move.to_new(p2, new_twist)
        problems = []
        if p.val() != q.val():
            problems.append("f_x != f_y (x-side sample)")
        if q2.val() != p2.val():
            problems.append("f_y != f_x (y-side sample)")
        if not back.agrees(p) or not fwd.agrees(q2):
            problems.append("round trip")
        # one-sided inequalities: re-expanding in the same ring never lowers f
        if move.to_old(p, twist).val() < p.val() or move.to_new(q2, new_twist).val() < q2.val():
            problems.append("val(entry) >= i")
        if problems:
            failures += 1
            if witness is None:
                witness = {"p": p.to_json(), "f_x": p.val().to_json(),
                           "f_y": q.val().to_json(), "problems": problems}
    return CheckReport("filtration-equality", failures == 0, trials, failures, witness,
                       details={"move": move.to_json()})


def example_counterexample(ring, n_max):
    """(x + 1)^n for n = 1..n_max: f_x versus f_y with y = x + 1, polynomial mode."""
    from .twist import TRIVIAL
    one = ring.one()
    rows = []
    t = -one              # y = x - t = x + 1
    for n in range(1, n_max + 1):
        p = [one, one]
        for _ in range(n - 1):
            p = poly_mul(TRIVIAL, p, [one, one])
        y_coords = poly_substitute_shift(TRIVIAL, p, -t, unsafe=True)
        rows.append({"n": n, "f_x": poly_val(p), "f_y": poly_val(y_coords),
                     "x_coeffs": [c.to_json() for c in p],
                     "y_coeffs": [c.to_json() for c in y_coords]})
    return rows
