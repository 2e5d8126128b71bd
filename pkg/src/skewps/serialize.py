"""Canonical text forms for rings, elements, twists, series and contexts.

Everything is JSON.  ``dumps`` is the canonical writer (sorted keys, no
whitespace), so equal objects always serialise to identical bytes.  Parsers
raise :class:`ParseError`; syntax errors carry the character offset and
shape errors carry the JSON path of the offending value.

Ring descriptors may also be written in a compact form, e.g.
``Matrix(2,Zp(2,8))`` or ``FqSeries(4,8)``.
"""

from __future__ import annotations

import json
import re

from .errors import ParseError
from .rings import Element, FqSeries, Matrix, Product, Zp
from .series import SkewSeries
from .twist import (Auto, Componentwise, ComponentwiseD, Conjugation, Deriv, FactorPermutation,
                    FrobeniusPow, Inner, LeftMultiple, MatrixLift, MatrixLiftD, PiDerivative,
                    ScaleUniformiser, TauTimes, Twist)


def dumps(obj):
    """Canonical serialisation."""
    if hasattr(obj, "to_json"):
        obj = obj.to_json()
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", exc.pos) from None


def _fail(path, msg):
    raise ParseError(f"{msg} at {path}")


def _obj(x, path, keys=None):
    if not isinstance(x, dict):
        _fail(path, f"expected an object, got {type(x).__name__}")
    if keys is not None:
        missing = [k for k in keys if k not in x]
        if missing:
            _fail(path, f"missing key(s) {', '.join(missing)}")
    return x


def _int(x, path, lo=None):
    if not isinstance(x, int) or isinstance(x, bool):
        _fail(path, f"expected an integer, got {x!r}")
    if lo is not None and x < lo:
        _fail(path, f"expected an integer >= {lo}, got {x}")
    return x


def _list(x, path):
    if not isinstance(x, list):
        _fail(path, f"expected a list, got {type(x).__name__}")
    return x


# -- rings -------------------------------------------------------------------------

_COMPACT = re.compile(r"\s*(Zp|FqSeries|Matrix|Product)\s*\(")


def _parse_compact(text, pos=0):
    m = _COMPACT.match(text, pos)
    if not m:
        raise ParseError("expected Zp(...), FqSeries(...), Matrix(...) or Product(...)", pos)
    kind = m.group(1)
    pos = m.end()
    args = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            raise ParseError("unterminated ring descriptor", pos)
        if text[pos] == ")":
            pos += 1
            break
        if text[pos] == ",":
            pos += 1
            continue
        num = re.match(r"\d+", text[pos:])
        if num:
            args.append(int(num.group()))
            pos += num.end()
        else:
            sub, pos = _parse_compact(text, pos)
            args.append(sub)
    try:
        if kind == "Zp" and len(args) == 2 and all(isinstance(a, int) for a in args):
            return Zp(*args), pos
        if kind == "FqSeries" and len(args) == 2 and all(isinstance(a, int) for a in args):
            return FqSeries(*args), pos
        if kind == "Matrix" and len(args) == 2 and isinstance(args[0], int):
            return Matrix(args[0], args[1]), pos
        if kind == "Product" and args and not any(isinstance(a, int) for a in args):
            return Product(tuple(args)), pos
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc), m.start()) from None
    raise ParseError(f"bad arguments for {kind}", m.start())


def ring_from_json(d, path="$"):
    if isinstance(d, str):
        ring, pos = _parse_compact(d)
        if d[pos:].strip():
            raise ParseError("trailing characters after ring descriptor", pos)
        return ring
    _obj(d, path, ["kind"])
    kind = d["kind"]
    try:
        if kind == "Zp":
            _obj(d, path, ["p", "N"])
            return Zp(_int(d["p"], path + ".p", 2), _int(d["N"], path + ".N", 1))
        if kind == "FqSeries":
            _obj(d, path, ["q", "N"])
            return FqSeries(_int(d["q"], path + ".q", 2), _int(d["N"], path + ".N", 1))
        if kind == "Matrix":
            _obj(d, path, ["n", "inner"])
            return Matrix(_int(d["n"], path + ".n", 1), ring_from_json(d["inner"], path + ".inner"))
        if kind == "Product":
            _obj(d, path, ["factors"])
            fs = _list(d["factors"], path + ".factors")
            return Product(tuple(ring_from_json(f, f"{path}.factors[{i}]")
                                 for i, f in enumerate(fs)))
    except ValueError as exc:
        _fail(path, str(exc))
    _fail(path + ".kind", f"unknown ring kind {kind!r}")


def parse_ring(text):
    text = text.strip()
    if text.startswith("{"):
        return ring_from_json(loads(text))
    return ring_from_json(text)


# -- elements ------------------------------------------------------------------------

def element_from_json(ring, x, path="$"):
    prec = None
    if isinstance(x, dict):
        _obj(x, path, ["prec", "value"])
        prec = _int(x["prec"], path + ".prec", 0)
        x = x["value"]
    try:
        if isinstance(x, int) and not isinstance(x, bool) and isinstance(ring, (Matrix, Product)):
            # an integer stands for the scalar n * 1
            k = ring.N if prec is None else prec
            return ring.from_int(x, k) if x or prec is not None else ring.zero()
        return ring.element(x, prec)
    except (TypeError, ValueError, IndexError) as exc:
        _fail(path, f"bad {ring} literal: {exc}")
    except Exception as exc:  # PrecisionError and friends
        _fail(path, str(exc))


# -- twists --------------------------------------------------------------------------

def auto_from_json(ring, x, path="$"):
    steps = []
    for i, st in enumerate(_list(x, path)):
        p = f"{path}[{i}]"
        _obj(st, p)
        if "frob" in st:
            steps.append(FrobeniusPow(_int(st["frob"], p + ".frob")))
        elif "scale" in st:
            steps.append(ScaleUniformiser(element_from_json(ring, st["scale"], p + ".scale")))
        elif "conj" in st:
            steps.append(Conjugation(element_from_json(ring, st["conj"], p + ".conj")))
        elif "matlift" in st:
            if not isinstance(ring, Matrix):
                _fail(p, f"matlift needs a matrix ring, got {ring}")
            steps.append(MatrixLift(auto_from_json(ring.inner, st["matlift"], p + ".matlift")))
        elif "perm" in st:
            perm = tuple(_int(j, p + ".perm", 0) for j in _list(st["perm"], p + ".perm"))
            steps.append(FactorPermutation(perm))
        elif "componentwise" in st:
            if not isinstance(ring, Product):
                _fail(p, f"componentwise needs a product ring, got {ring}")
            parts = _list(st["componentwise"], p + ".componentwise")
            steps.append(Componentwise(tuple(
                auto_from_json(f, a, f"{p}.componentwise[{j}]")
                for j, (f, a) in enumerate(zip(ring.factors, parts)))))
        else:
            _fail(p, f"unknown automorphism step with keys {sorted(st)}")
    return Auto(tuple(steps))


def deriv_from_json(ring, x, path="$"):
    terms = []
    for i, t in enumerate(_list(x, path)):
        p = f"{path}[{i}]"
        _obj(t, p)
        if "inner" in t:
            sigma = auto_from_json(ring, t["sigma"], p + ".sigma") if "sigma" in t else None
            terms.append(Inner(element_from_json(ring, t["inner"], p + ".inner"), sigma))
        elif "tau_times" in t:
            tau = auto_from_json(ring, t["tau"], p + ".tau") if "tau" in t else None
            terms.append(TauTimes(element_from_json(ring, t["tau_times"], p + ".tau_times"), tau))
        elif "leftmul" in t:
            _obj(t, p, ["delta"])
            terms.append(LeftMultiple(element_from_json(ring, t["leftmul"], p + ".leftmul"),
                                      deriv_from_json(ring, t["delta"], p + ".delta")))
        elif "matlift" in t:
            if not isinstance(ring, Matrix):
                _fail(p, f"matlift needs a matrix ring, got {ring}")
            terms.append(MatrixLiftD(deriv_from_json(ring.inner, t["matlift"], p + ".matlift")))
        elif "componentwise" in t:
            if not isinstance(ring, Product):
                _fail(p, f"componentwise needs a product ring, got {ring}")
            parts = _list(t["componentwise"], p + ".componentwise")
            terms.append(ComponentwiseD(tuple(
                deriv_from_json(f, d, f"{p}.componentwise[{j}]")
                for j, (f, d) in enumerate(zip(ring.factors, parts)))))
        elif "dpi" in t:
            terms.append(PiDerivative())
        else:
            _fail(p, f"unknown derivation term with keys {sorted(t)}")
    return Deriv(tuple(terms))


def twist_from_json(ring, x, path="$"):
    if x is None:
        return Twist()
    _obj(x, path)
    unknown = set(x) - {"sigma", "delta"}
    if unknown:
        _fail(path, f"unknown twist key(s) {sorted(unknown)}")
    sigma = auto_from_json(ring, x.get("sigma", []), path + ".sigma")
    delta = deriv_from_json(ring, x.get("delta", []), path + ".delta")
    return Twist(sigma, delta)


# -- contexts and series -----------------------------------------------------------------

class Context:
    """(ring, twist, cap): everything needed to read a series literal."""

    def __init__(self, ring, twist, cap=None):
        self.ring = ring
        self.twist = twist
        self.cap = ring.N if cap is None else cap

    def to_json(self):
        return {"ring": self.ring.describe(), "twist": self.twist.to_json(), "cap": self.cap}

    def series(self, coeffs):
        return SkewSeries(self.ring, self.twist, self.cap, coeffs)


def context_from_json(x, path="$"):
    _obj(x, path, ["ring"])
    ring = ring_from_json(x["ring"], path + ".ring")
    twist = twist_from_json(ring, x.get("twist"), path + ".twist")
    cap = _int(x["cap"], path + ".cap", 0) if "cap" in x else None
    return Context(ring, twist, cap)


def series_from_json(x, ctx=None, path="$"):
    """A series literal; a self-contained one carries ring/twist/cap itself."""
    _obj(x, path, ["coeffs"])
    if "ring" in x:
        ctx = context_from_json(x, path)
    if ctx is None:
        _fail(path, "series literal without a ring context")
    cap = _int(x["cap"], path + ".cap", 0) if "cap" in x else ctx.cap
    coeffs = [element_from_json(ctx.ring, c, f"{path}.coeffs[{i}]")
              for i, c in enumerate(_list(x["coeffs"], path + ".coeffs"))]
    if len(coeffs) > cap:
        _fail(path + ".coeffs", f"{len(coeffs)} coefficients for cap {cap}")
    try:
        return SkewSeries(ctx.ring, ctx.twist, cap, coeffs)
    except Exception as exc:
        _fail(path, str(exc))


def series_to_json(s, with_context=False):
    out = s.to_json()
    if with_context:
        out["ring"] = s.ring.describe()
        out["twist"] = s.twist.to_json()
    return out


def iso_context_from_json(x, path="$"):
    """Witness data (a, tau, theta, u) on M_n(D)."""
    from .untwist import IsoContext
    _obj(x, path, ["ring", "a", "tau", "u"])
    M = ring_from_json(x["ring"], path + ".ring")
    if not isinstance(M, Matrix):
        _fail(path + ".ring", f"expected a matrix ring, got {M}")
    D = M.inner
    return IsoContext(M, element_from_json(M, x["a"], path + ".a"),
                      auto_from_json(D, x["tau"], path + ".tau"),
                      deriv_from_json(D, x.get("theta", []), path + ".theta"),
                      element_from_json(M, x["u"], path + ".u"))


def element_to_json(e):
    return e.to_json()


__all__ = ["Context", "Element", "auto_from_json", "context_from_json", "deriv_from_json",
           "dumps", "element_from_json", "element_to_json", "iso_context_from_json", "loads",
           "parse_ring", "ring_from_json", "series_from_json", "series_to_json",
           "twist_from_json"]
