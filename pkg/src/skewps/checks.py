"""Seeded property suites.

Each suite is a function ``(trials, seed) -> SuiteReport``.  All randomness
comes from ``random.Random(f"{seed}/{suite}/...")`` so a report is a pure
function of its arguments, and every report carries the command line that
reproduces it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import HypothesisViolated, SkewError, UnknownSuite
from .level import Level
from .rings import FqSeries, Matrix, Product, Zp, uniformiser
from .series import SkewSeries
from .twist import (IDENTITY, Auto, Deriv, FactorPermutation, Inner, MatrixLift, MatrixLiftD,
                    PiDerivative, Twist, check_compatible, check_leibniz,
                    check_sigma_homomorphism, deriv, Conjugation)
from . import reparam, samples, untwist, weierstrass


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int
    passed: bool
    failures: int = 0
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def reproduce(self):
        return f"skewps check {self.suite} --trials {self.trials} --seed {self.seed}"

    def to_json(self):
        return {"suite": self.suite, "seed": self.seed, "trials": self.trials,
                "passed": self.passed, "failures": self.failures, "witness": self.witness,
                "details": self.details, "reproduce": self.reproduce}


class _Tally:
    """Counts failing trials and keeps the first witness."""

    def __init__(self, suite, trials, seed):
        self.suite, self.trials, self.seed = suite, trials, seed
        self.failures = 0
        self.witness = None
        self.runs = 0

    def rng(self, *parts):
        return random.Random("/".join([str(self.seed), self.suite] + [str(p) for p in parts]))

    def record(self, ok, witness=None):
        self.runs += 1
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = witness() if callable(witness) else witness
        return ok

    def run(self, label, fn):
        """fn() -> (ok, witness); a kernel error counts as a failed trial."""
        try:
            ok, wit = fn()
        except SkewError as exc:
            ok, wit = False, {"trial": label, "error": exc.name, "message": str(exc)}
        return self.record(ok, wit)

    def absorb(self, report, label=None):
        """Fold a sub-check's CheckReport into this tally."""
        self.runs += 1
        if not report.passed:
            self.failures += 1
            if self.witness is None:
                self.witness = {"check": report.name, "config": label,
                                "witness": report.witness}

    def done(self, **details):
        return SuiteReport(self.suite, self.seed, self.trials, self.failures == 0,
                           self.failures, self.witness, details)


# -- configurations -----------------------------------------------------------------------

def _base_rings(N=8):
    return (Zp(2, N), FqSeries(4, N), FqSeries(9, min(N, 6)))


def _config_rings(N=8):
    return (Zp(2, N), FqSeries(4, N), Matrix(2, Zp(2, N)), Matrix(2, FqSeries(4, N)))


def _product_ring(N=8):
    return Product((Zp(2, N), Zp(2, N), FqSeries(4, N)))


# -- filtered-core ------------------------------------------------------------------------

def suite_ring_axioms(trials, seed):
    t = _Tally("ring-axioms", trials, seed)
    rings = _config_rings() + (_product_ring(),)
    for R in rings:
        rng = t.rng(R.describe())
        for _ in range(trials):
            a, b, c = (R.random(rng, prec=rng.randrange(1, R.N + 1)) for _ in range(3))
            one, zero = R.one(), R.zero()
            ok = (((a + b) + c).agrees(a + (b + c)) and (a + b).agrees(b + a)
                  and ((a * b) * c).agrees(a * (b * c))
                  and (a * (b + c)).agrees(a * b + a * c)
                  and ((a + b) * c).agrees(a * c + b * c)
                  and (a * one).agrees(a) and (one * a).agrees(a)
                  and (a - a).agrees(zero))
            t.record(ok, lambda: {"ring": R.describe(), "a": a.to_json(), "b": b.to_json(),
                                  "c": c.to_json()})
    return t.done(rings=[R.describe() for R in rings])


def suite_filtration_axioms(trials, seed):
    t = _Tally("filtration-axioms", trials, seed)
    rings = _config_rings() + (_product_ring(),)
    for R in rings:
        rng = t.rng(R.describe())
        t.record(R.one().val() == Level(0), {"ring": R.describe(), "reason": "f(1) != 0"})
        t.record(R.zero().val().is_infinite, {"ring": R.describe(), "reason": "f(0) != inf"})
        for i in range(trials):
            a = R.random(rng, val=i % R.N)
            b = R.random(rng, val=rng.randrange(R.N))
            va, vb = a.val(), b.val()
            ok = ((a + b).vlow() >= min(va.value, vb.value)
                  and (a * b).vlow() >= min(va.value + vb.value, R.N)
                  and (-a).val() == va)
            t.record(ok, lambda: {"ring": R.describe(), "a": a.to_json(), "b": b.to_json()})
    return t.done(rings=[R.describe() for R in rings])


def suite_matrix_val(trials, seed):
    t = _Tally("matrix-val", trials, seed)
    for M in (Matrix(2, Zp(2, 8)), Matrix(3, FqSeries(4, 8))):
        rng = t.rng(M.describe())
        for i in range(trials):
            a = M.random(rng, val=i % M.N)
            entries = Level.min_of(M.entry(a, r, c).val()
                                   for r in range(M.n) for c in range(M.n))
            t.record(a.val() == entries, lambda: {"ring": M.describe(), "a": a.to_json()})
    return t.done()


def suite_invert_unit(trials, seed):
    t = _Tally("invert-unit", trials, seed)
    for R in _config_rings():
        rng = t.rng(R.describe())
        for _ in range(trials):
            a = R.random_unit(rng)
            ai = a.inverse()
            t.record((a * ai).agrees(R.one()) and (ai * a).agrees(R.one()),
                     lambda: {"ring": R.describe(), "a": a.to_json()})
        # series units through the skew product
        tw = samples.config_twist(R, rng)
        for _ in range(max(1, trials // 10)):
            s = reparam.random_series(R, tw, R.N, rng)
            s = s.like([R.random_unit(rng)] + list(s.coeffs[1:]))
            def go():
                si = s.inverse()
                one = SkewSeries.one(R, tw)
                return (s * si).agrees(one) and (si * s).agrees(one), {
                    "ring": R.describe(), "twist": tw.to_json(), "s": s.to_json()}
            t.run("series", go)
    return t.done()


def suite_pi_unit(trials, seed):
    """Nonzero elements of Zp and F_q[[pi]] factor as pi^n * unit."""
    t = _Tally("pi-unit", trials, seed)
    for R in _base_rings():
        rng = t.rng(R.describe())
        pi = uniformiser(R)
        for i in range(trials):
            a = R.random(rng, val=i % R.N)
            n = int(a.val())
            u = a.divide_by_uniformiser(n)
            ok = u.val() == Level(0) and (pi ** n * u.lift(R.N)).agrees(a)
            t.record(ok, lambda: {"ring": R.describe(), "a": a.to_json()})
    return t.done()


# -- skew-data --------------------------------------------------------------------------

def suite_sigma_hom(trials, seed):
    t = _Tally("sigma-hom", trials, seed)
    for R in _config_rings() + (_product_ring(),):
        rng = t.rng(R.describe())
        for k in range(4):
            if isinstance(R, Product):
                sigma = Auto((FactorPermutation((1, 0, 2)),))
            else:
                sigma = samples.config_twist(R, rng).sigma
            t.absorb(check_sigma_homomorphism(sigma, R, trials, f"{seed}/{k}"),
                     {"ring": R.describe(), "sigma": sigma.to_json()})
    return t.done()


def suite_leibniz(trials, seed):
    t = _Tally("leibniz", trials, seed)
    for R in _config_rings():
        rng = t.rng(R.describe())
        for k in range(4):
            tw = samples.config_twist(R, rng)
            t.absorb(check_leibniz(tw, R, trials, f"{seed}/{k}"),
                     {"ring": R.describe(), "twist": tw.to_json()})
    # d/dpi is a derivation even though it is not compatible
    R = FqSeries(4, 8)
    t.absorb(check_leibniz(Twist(IDENTITY, deriv(PiDerivative())), R, trials, seed),
             {"ring": R.describe(), "twist": "d/dpi"})
    return t.done()


def suite_compatible(trials, seed):
    t = _Tally("compatible", trials, seed)
    certified = 0
    for R in _config_rings():
        rng = t.rng(R.describe())
        for k in range(4):
            tw = samples.config_twist(R, rng)
            rep = check_compatible(tw, R, trials, f"{seed}/{k}")
            certified += bool(rep.certified)
            t.absorb(rep, {"ring": R.describe(), "twist": tw.to_json()})
            # inner derivations with v(t) >= 1 gain at least one level
            if isinstance(R, Matrix):
                tt = R.random(rng, val=rng.randrange(1, R.N))
                d = deriv(Inner(tt)).bind(tw.sigma)
                for i in range(trials):
                    r = R.random(rng, val=i % R.N)
                    t.record(d.apply(r).vlow() >= min(r.vlow() + 1, R.N),
                             lambda: {"ring": R.describe(), "t": tt.to_json(),
                                      "r": r.to_json(), "reason": "inner derivation gain"})
    return t.done(structurally_certified=certified)


def suite_compat_gate(trials, seed):
    """d/dpi on F_q[[pi]] (d(pi) = 1) must be rejected with a val-0 image."""
    t = _Tally("compat-gate", trials, seed)
    R = FqSeries(4, 8)
    tw = Twist(IDENTITY, deriv(PiDerivative()))
    rep = check_compatible(tw, R, trials, seed)
    img = tw.delta.apply(uniformiser(R))
    ok = (not rep.passed and rep.witness is not None
          and rep.witness["val(delta(r))"] == Level(0).to_json()
          and img.agrees(R.one()) and rep.certified is False)
    t.record(ok, {"reason": "incompatible derivation was not rejected", "report": rep.to_json()})
    return t.done(rejection=rep.to_json())


# -- sps-arith -------------------------------------------------------------------------------

def _assoc_configs(N_values=(4, 8, 16)):
    for N in N_values:
        yield from (Zp(2, N), FqSeries(4, N), Matrix(2, Zp(2, N)))


def suite_assoc(trials, seed):
    """(ab)c = a(bc) modulo the cap, for N in {4, 8, 16}."""
    t = _Tally("assoc", trials, seed)
    configs = []
    for R in _assoc_configs():
        rng = t.rng(R.describe())
        tw = samples.config_twist(R, rng)
        configs.append({"ring": R.describe(), "twist": tw.to_json()})
        for _ in range(trials):
            a, b, c = (reparam.random_series(R, tw, R.N, rng) for _ in range(3))
            t.run(R.describe(), lambda: (((a * b) * c).agrees(a * (b * c)), {
                "ring": R.describe(), "twist": tw.to_json(), "a": a.to_json(),
                "b": b.to_json(), "c": c.to_json()}))
    return t.done(configurations=configs)


def suite_series_axioms(trials, seed):
    """Distributivity, left-module axioms, induced filtration, x F_k in F_{k+1}, round trip."""
    from .serialize import dumps, loads, series_from_json, series_to_json
    t = _Tally("series-axioms", trials, seed)
    for R in _config_rings():
        rng = t.rng(R.describe())
        tw = samples.config_twist(R, rng)
        x = SkewSeries.variable(R, tw)
        for _ in range(trials):
            a, b, c = (reparam.random_series(R, tw, R.N, rng) for _ in range(3))
            r, s = R.random(rng), R.random(rng)
            fa, fb = a.val(), b.val()

            def go():
                ok = ((a * (b + c)).agrees(a * b + a * c)
                      and ((a + b) * c).agrees(a * c + b * c)
                      and ((r * s) * a).agrees(r * (s * a))
                      and ((r + s) * a).agrees(r * a + s * a)
                      and (a * b).val().value >= min(fa.value + fb.value, R.N)
                      and (a + b).val().value >= min(fa.value, fb.value)
                      and (x * a).val().value >= min(fa.value + 1, R.N))
                back = series_from_json(loads(dumps(series_to_json(a, True))))
                ok = ok and back == a and back.truncate(R.N) == a
                return ok, {"ring": R.describe(), "twist": tw.to_json(),
                            "a": a.to_json(), "b": b.to_json(), "c": c.to_json()}
            t.run(R.describe(), go)
    return t.done()


# -- reparam ------------------------------------------------------------------------------

def _table_configs(trials, t):
    rings = (Matrix(2, Zp(2, 8)), FqSeries(4, 8), Matrix(2, FqSeries(4, 8)))
    for k in range(trials):
        R = rings[k % len(rings)]
        rng = t.rng(k)
        yield R, samples.config_twist(R, rng), rng


def _check_table(t, table, factor, twist, R, n_max, label):
    power = [R.one()]
    for n in range(n_max + 1):
        row = table[n]
        brute = [power[n - i] for i in range(n + 1)]
        if not all(e.is_zero() or e.vlow() >= i for i, e in enumerate(row)):
            return False, {"row": n, "reason": f"val({label}[n][i]) < i",
                           "table_row": [e.to_json() for e in row]}
        if not all(e.agrees(f) for e, f in zip(row, brute)):
            return False, {"row": n, "reason": "table row differs from the expanded power",
                           "table_row": [e.to_json() for e in row],
                           "expanded": [e.to_json() for e in brute]}
        power = reparam.poly_mul(twist, factor, power)
    return True, None


def suite_lemma_beta(trials, seed, n_max=12):
    """v(beta[n][i]) >= i and rows equal the expansion of (x - t)^n."""
    t = _Tally("lemma-beta", trials, seed)
    for R, tw, rng in _table_configs(trials, t):
        tt = R.random(rng, val=rng.randrange(1, R.N))

        def go():
            table = reparam.beta_coeffs(tw, tt, n_max)
            ok, wit = _check_table(t, table, [-tt, R.one()], tw, R, n_max, "beta")
            if wit:
                wit.update(ring=R.describe(), twist=tw.to_json(), t=tt.to_json())
            return ok, wit
        t.run(R.describe(), go)
    return t.done(n_max=n_max)


def suite_lemma_gamma(trials, seed, n_max=12):
    """v(gamma[n][i]) >= i and rows equal the expansion of (a x)^n."""
    t = _Tally("lemma-gamma", trials, seed)
    for R, tw, rng in _table_configs(trials, t):
        a = R.random_unit(rng)

        def go():
            table = reparam.gamma_coeffs(tw, a, n_max)
            ok, wit = _check_table(t, table, [R.zero(), a], tw, R, n_max, "gamma")
            if wit:
                wit.update(ring=R.describe(), twist=tw.to_json(), a=a.to_json())
            return ok, wit
        t.run(R.describe(), go)
    return t.done(n_max=n_max)


def _filtration_suite(name, make_move, trials, seed):
    t = _Tally(name, trials, seed)
    configs = []
    for R, k in ((R, k) for R in _config_rings() for k in range(2)):
        rng = t.rng(R.describe(), k)
        tw = samples.config_twist(R, rng)
        move = make_move(R, rng)
        configs.append({"ring": R.describe(), "twist": tw.to_json(), "move": move.to_json()})
        rep = reparam.check_filtration_equality(tw, R, move, trials,
                                                f"{seed}/{R.describe()}/{k}")
        t.absorb(rep, configs[-1])
        ro = reparam.verify_new_twist(move, tw, move.new_twist(tw), R, trials, seed)
        t.absorb(ro, configs[-1])
        configs[-1]["printed_form_mismatches"] = ro.details["printed_form_mismatches"]
    return t.done(configurations=configs)


def suite_prop34(trials, seed):
    """f_x = f_y under y = x - t with v(t) >= 1, in both directions; round trips are identities."""
    return _filtration_suite(
        "prop3.4", lambda R, rng: reparam.Shift(R.random(rng, val=rng.randrange(1, R.N))),
        trials, seed)


def suite_prop37(trials, seed):
    """f_x = f_y under y = a x with a a unit, in both directions."""
    return _filtration_suite("prop3.7", lambda R, rng: reparam.Scale(R.random_unit(rng)),
                             trials, seed)


def suite_prop34_counterexample(trials, seed, n_max=7):
    """With t = -1 (y = x + 1), f_x((x+1)^n) = 0 but f_y = n: the shift needs v(t) >= 1.

    Passes when the failure is reproduced exactly and the shift move refuses t.
    """
    t = _Tally("prop3.4-counterexample", trials, seed)
    R = Zp(2, 8)
    rows = reparam.example_counterexample(R, n_max)
    for row in rows:
        t.record(row["f_x"] == Level(0) and row["f_y"] == Level(row["n"]),
                 {"n": row["n"], "f_x": row["f_x"].to_json(), "f_y": row["f_y"].to_json()})
    try:
        reparam.Shift(-R.one()).check()
        refused = False
    except HypothesisViolated:
        refused = True
    t.record(refused, {"reason": "the shift move accepted t = -1"})
    return t.done(ring=R.describe(), t=(-R.one()).to_json(),
                  rows=[{"n": r["n"], "f_x": r["f_x"].to_json(), "f_y": r["f_y"].to_json()}
                        for r in rows],
                  shift_refused=refused)


# -- untwist --------------------------------------------------------------------------------

def _contexts(t, count, rings):
    for k in range(count):
        D = rings[k % len(rings)]
        rng = t.rng(k)
        yield samples.iso_context(D, rng), rng


def suite_normalize_inner(trials, seed, samples_per=20):
    t = _Tally("normalize-inner", trials, seed)
    for ctx, rng in _contexts(t, trials, (Zp(2, 8),)):
        def go():
            fs = ctx.factored_sigma()
            norm = untwist.normalize_inner(fs)
            b = norm.b
            M = ctx.ring
            ok = b.val() == Level(0) and b.inverse().val() == Level(0)
            ok = ok and (norm.pi_power * b).agrees(ctx.a)
            lhs = Auto((Conjugation(b), MatrixLift(norm.tau)))
            rhs = fs.auto()
            for i in range(samples_per):
                r = M.random(rng, val=i % M.N)
                ok = ok and lhs.apply(r).agrees(rhs.apply(r))
                # both preserve the valuation ring
                ok = ok and lhs.apply(r).vlow() >= 0 and lhs.apply(r).val() == r.val()
            return ok, {"context": ctx.to_json()}
        t.run("context", go)
    return t.done()


def suite_untwist_delta(trials, seed, samples_per=20):
    t = _Tally("untwist-delta", trials, seed)
    for ctx, rng in _contexts(t, trials, (Zp(2, 8),)):
        def go():
            M, tau = ctx.ring, ctx.tau
            fd = ctx.factored_delta()
            u_prime, theta_prime = untwist.untwist_delta(fd, tau, M)
            ok = u_prime.vlow() >= 1
            old = Twist(Auto((MatrixLift(tau),)), fd.inner_deriv(tau))
            new = Twist(Auto((MatrixLift(tau),)),
                        Deriv((MatrixLiftD(theta_prime), Inner(u_prime))))
            for i in range(samples_per):
                r = M.random(rng, val=i % M.N)
                ok = ok and new.delta.apply(r).agrees(old.delta.apply(r))
            lz = check_leibniz(Twist(tau, theta_prime), M.inner, samples_per, seed)
            return ok and lz.passed, {"context": ctx.to_json(), "u_prime": u_prime.to_json()}
        t.run("context", go)
    return t.done()


def _iso_rings():
    return (Zp(2, 8), FqSeries(4, 6))


def suite_theorem_a(trials, seed, contexts=20):
    """phi is a filtered ring isomorphism with phi(a'x - t') = y I and phi = iota in degree 0.

    ``trials`` is the number of sampled pairs per context.
    """
    t = _Tally("theorem-a", trials, seed)
    for ctx, rng in _contexts(t, contexts, _iso_rings()):
        label = ctx.to_json()

        def setup():
            iso = untwist.theorem_A_map(ctx, trials=20, seed=seed)
            return iso, ctx.twist()
        try:
            iso, tw = setup()
        except SkewError as exc:
            t.record(False, {"context": label, "error": exc.name, "message": str(exc)})
            continue
        M, N = ctx.ring, ctx.ring.N
        t.record(iso.apply(iso.statement_element()) == iso.y_identity(),
                 {"context": label, "reason": "phi(a'x - t') != y I"})
        for _ in range(trials):
            a = reparam.random_series(M, tw, N, rng)
            b = reparam.random_series(M, tw, N, rng)
            r = M.random(rng)

            def go():
                pa, pb = iso.apply(a), iso.apply(b)
                ok = (iso.apply(a * b) == pa * pb and iso.apply(a + b) == pa + pb
                      and pa.val() == a.val() and iso.unapply(pa) == a)
                pr = iso.apply(SkewSeries.constant(r, tw))
                grid = [[e.coeffs[0] for e in row] for row in pr.entries]
                ok = ok and M.from_entries(grid).agrees(r) and all(
                    c.is_zero() for row in pr.entries for e in row for c in e.coeffs[1:])
                return ok, {"context": label, "a": a.to_json(), "b": b.to_json(),
                            "r": r.to_json()}
            t.run("pair", go)
    return t.done(contexts=contexts, rings=[D.describe() for D in _iso_rings()])


def suite_split_orbits(trials, seed):
    t = _Tally("split-orbits", trials, seed)
    P = _product_ring()
    rng = t.rng("product")
    tt = P.random(rng, val=1)
    tw = Twist(Auto((FactorPermutation((1, 0, 2)),)), deriv(Inner(tt)))
    split = untwist.split_orbits(P, tw, (0, 1), trials=20, seed=seed)
    for _ in range(trials):
        a = reparam.random_series(P, tw, P.N, rng)
        b = reparam.random_series(P, tw, P.N, rng)

        def go():
            pa, pb, pab = split.phi(a), split.phi(b), split.phi(a * b)
            ok = (pab[0] == pa[0] * pb[0] and pab[1] == pa[1] * pb[1]
                  and Level.min_of([pa[0].val(), pa[1].val()]) == a.val()
                  and split.theta(pa) == a)
            return ok, {"a": a.to_json(), "b": b.to_json()}
        t.run("pair", go)
    return t.done(ring=P.describe(), twist=tw.to_json())


# -- weierstrass ----------------------------------------------------------------------------

def planted_instance(D, rng):
    """P (distinguished, monic, degree <= 4) * unit * pi^m, with d + m below the cap."""
    tw = samples.base_twist(D, rng)
    N = D.N
    d = rng.randrange(0, 5)
    m = rng.randrange(0, min(4, N - d))
    P = SkewSeries(D, tw, N, [D.random(rng, val=rng.randrange(1, N)) for _ in range(d)]
                   + [D.one()])
    u = SkewSeries(D, tw, N, [D.random_unit(rng)] + [D.random(rng) for _ in range(N - 1)])
    r = P * u * SkewSeries.constant(uniformiser(D) ** m, tw, N)
    return r, P, u, d, m


def _weierstrass_rings():
    return (Zp(2, 8), FqSeries(4, 8), FqSeries(9, 6))


def suite_weierstrass(trials, seed):
    """Construct-then-recover: residual 0, correct (d, m), schedules agree, pi-normality."""
    t = _Tally("weierstrass", trials, seed)
    rings = _weierstrass_rings()
    for k in range(trials):
        D = rings[k % len(rings)]
        rng = t.rng(k)
        r, P, u, d, m = planted_instance(D, rng)

        def go():
            fa = weierstrass.prepare_element(r, "remainder")
            fb = weierstrass.prepare_element(r, "residual")
            s, m2 = weierstrass.depolarize(r)
            pi = uniformiser(D)
            c = weierstrass.pi_normal_conjugate(s)
            ok = ((fa.d, fa.m) == (d, m) and fa.agrees(fb)
                  and fa.residual(s).is_zero() and m2 == m
                  and weierstrass.is_distinguished(fa.P, fa.d)
                  and (pi * s).truncate(s.cap - 1) == c * SkewSeries.constant(pi, s.twist,
                                                                              s.cap - 1))
            return ok, {"ring": D.describe(), "twist": r.twist.to_json(), "r": r.to_json(),
                        "planted": {"d": d, "m": m}, "found": {"d": fa.d, "m": fa.m}}
        t.run(D.describe(), go)
    return t.done(rings=[D.describe() for D in rings], schedules=list(weierstrass.SCHEDULES))


def suite_ideal_poly(trials, seed):
    """Polynomial elements of ideals: right ideals over D, two-sided ones over M_2(D)."""
    t = _Tally("ideal-poly", trials, seed)
    bases = (Zp(2, 8), FqSeries(4, 8))
    iso_bases = _iso_rings()
    isos = {}
    for k in range(trials):
        rng = t.rng(k)
        if k % 2 == 0:
            D = bases[(k // 2) % len(bases)]
            tw = samples.base_twist(D, rng)
            r = _nonzero_generator(D, tw, rng)

            def go():
                w = weierstrass.polynomial_in_right_ideal(r)
                return w.verify() and w.degree == w.form.d, {
                    "ring": D.describe(), "twist": tw.to_json(), "r": r.to_json()}
        else:
            D = iso_bases[(k // 2) % len(iso_bases)]
            if D not in isos:
                ctx = samples.iso_context(D, t.rng("context", D.describe()))
                isos[D] = (ctx, untwist.theorem_A_map(ctx, trials=20, seed=seed))
            ctx, iso = isos[D]
            r = _nonzero_generator(ctx.ring, ctx.twist(), rng)

            def go():
                w = weierstrass.polynomial_in_two_sided_ideal_matrix(r, iso)
                return w.verify() and 0 <= w.degree, {
                    "context": ctx.to_json(), "r": r.to_json()}
        t.run(k, go)
    return t.done()


def _nonzero_generator(R, tw, rng):
    while True:
        r = reparam.random_series(R, tw, R.N, rng, max_val=3)
        if not r.is_zero():
            return r


# -- registry ---------------------------------------------------------------------------------

SUITES = {
    "ring-axioms": (suite_ring_axioms, 200),
    "filtration-axioms": (suite_filtration_axioms, 200),
    "matrix-val": (suite_matrix_val, 200),
    "invert-unit": (suite_invert_unit, 200),
    "pi-unit": (suite_pi_unit, 200),
    "sigma-hom": (suite_sigma_hom, 200),
    "leibniz": (suite_leibniz, 200),
    "compatible": (suite_compatible, 200),
    "compat-gate": (suite_compat_gate, 200),
    "assoc": (suite_assoc, 200),
    "series-axioms": (suite_series_axioms, 50),
    "lemma-beta": (suite_lemma_beta, 50),
    "lemma-gamma": (suite_lemma_gamma, 50),
    "prop3.4": (suite_prop34, 200),
    "prop3.7": (suite_prop37, 200),
    "prop3.4-counterexample": (suite_prop34_counterexample, 1),
    "normalize-inner": (suite_normalize_inner, 50),
    "untwist-delta": (suite_untwist_delta, 50),
    "theorem-a": (suite_theorem_a, 200),
    "split-orbits": (suite_split_orbits, 100),
    "weierstrass": (suite_weierstrass, 100),
    "ideal-poly": (suite_ideal_poly, 50),
}


def run_suite(name, trials=None, seed=0):
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known suites: {', '.join(sorted(SUITES))}")
    fn, default = SUITES[name]
    return fn(default if trials is None else trials, seed)
