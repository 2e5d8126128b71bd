"""Complete positively filtered base rings at a finite level cap.

Four descriptor kinds: truncated p-adic integers ``Zp``, truncated power series
over a finite field ``FqSeries``, full matrix rings ``Matrix`` and finite
products ``Product``.  A descriptor knows how to do arithmetic on raw payloads
at a given precision ``k`` (meaning: modulo filtration level k); :class:`Element`
wraps a payload together with its precision and implements the jagged
precision contract.

Raw payloads are canonical representatives:

* Zp: an int in [0, p^k)
* FqSeries: a tuple of k field elements (coefficients of pi^0 .. pi^(k-1))
* Matrix: a tuple of rows, each a tuple of inner payloads
* Product: a tuple of factor payloads
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Tuple

from .errors import DescriptorMismatch, NotAUnit, NoUniformiser, PrecisionError
from .fields import gf
from .level import INFINITY, Level


class Ring:
    """Shared helpers; subclasses provide the raw arithmetic."""

    N: int

    # -- element construction -------------------------------------------------
    def zero(self, prec=None):
        """The literal zero; it is exact, so its valuation is infinite."""
        k = self.N if prec is None else prec
        return Element(self, self.zero_raw(k), k, exact=True)

    def one(self, prec=None):
        k = self.N if prec is None else prec
        return Element(self, self.one_raw(k), k)

    def from_int(self, n, prec=None):
        k = self.N if prec is None else prec
        if n == 0:
            return self.zero(k)
        return Element(self, self.int_raw(n, k), k)

    def element(self, payload, prec=None):
        """Build an element from a literal payload (see module docstring)."""
        k = self.N if prec is None else prec
        if not 0 <= k <= self.N:
            raise PrecisionError(f"precision {k} outside 0..{self.N}")
        raw = self.from_payload(payload, k)
        exact = prec is None and self.val(raw, k) is None
        return Element(self, raw, k, exact=exact)

    def random(self, rng, val=None, prec=None):
        """Random element; with ``val`` given, its valuation is exactly ``val``."""
        k = self.N if prec is None else prec
        if val is not None and val >= k:
            return Element(self, self.zero_raw(k), k)
        return Element(self, self.random_raw(rng, k, val), k)

    def random_unit(self, rng, prec=None):
        k = self.N if prec is None else prec
        while True:
            e = self.random(rng, val=0, prec=k)
            try:
                e.inverse()
                return e
            except NotAUnit:
                continue

    def is_zero_raw(self, x, k):
        return self.val(x, k) is None

    def sub(self, x, y, k):
        return self.add(x, self.neg(y, k), k)

    def dot(self, xs, ys, k):
        """sum_m xs[m] * ys[m] modulo level k."""
        acc = self.zero_raw(k)
        for x, y in zip(xs, ys):
            acc = self.add(acc, self.mul(x, y, k), k)
        return acc


@dataclass(frozen=True)
class Zp(Ring):
    p: int
    N: int

    kind = "Zp"
    is_dvr = True

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(math.isqrt(self.p)) + 1)):
            raise ValueError(f"p = {self.p} is not prime")
        if self.N < 1:
            raise ValueError("level cap must be >= 1")

    def zero_raw(self, k):
        return 0

    def one_raw(self, k):
        return 1 % self.p ** k

    def int_raw(self, n, k):
        return n % self.p ** k

    def reduce(self, x, k):
        return x % self.p ** k

    def add(self, x, y, k):
        return (x + y) % self.p ** k

    def neg(self, x, k):
        return (-x) % self.p ** k

    def mul(self, x, y, k):
        return (x * y) % self.p ** k

    def dot(self, xs, ys, k):
        return sum(map(operator.mul, xs, ys)) % self.p ** k

    def val(self, x, k):
        x %= self.p ** k
        if x == 0:
            return None
        if self.p == 2:
            return (x & -x).bit_length() - 1
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def inv(self, x, k):
        if k == 0:
            return 0
        if x % self.p == 0:
            raise NotAUnit(f"{x} is not a unit in Z_{self.p}")
        return pow(x, -1, self.p ** k)

    def random_raw(self, rng, k, v):
        m = self.p ** k
        if v is None:
            return rng.randrange(m)
        while True:
            u = rng.randrange(self.p ** (k - v))
            if u % self.p:
                return (u * self.p ** v) % m

    def uniformiser_raw(self, k):
        return self.p % self.p ** k

    def divide_pi(self, x, j, k):
        """x / pi^j, for x known modulo level k + j; raises if not divisible."""
        if x % self.p ** j:
            raise PrecisionError(f"{x} is not divisible by {self.p}^{j}")
        return (x // self.p ** j) % self.p ** k

    def split_uniformiser(self, x, k):
        v = self.val(x, k)
        if v is None:
            raise NotAUnit("zero has no uniformiser factorisation")
        return (x // self.p ** v) % self.p ** k, v

    def from_payload(self, payload, k):
        if not isinstance(payload, int) or isinstance(payload, bool):
            raise TypeError(f"Zp literal must be an integer, got {payload!r}")
        return payload % self.p ** k

    def to_payload(self, x):
        return x

    def describe(self):
        return {"kind": "Zp", "p": self.p, "N": self.N}

    def __str__(self):
        return f"Zp({self.p},{self.N})"


@dataclass(frozen=True)
class FqSeries(Ring):
    q: int
    N: int

    kind = "FqSeries"
    is_dvr = True

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("level cap must be >= 1")
        # cached table handle; excluded from equality and hashing
        object.__setattr__(self, "_field", gf(self.q))

    @property
    def field(self):
        return self._field

    def zero_raw(self, k):
        return (0,) * k

    def one_raw(self, k):
        return (1,) + (0,) * (k - 1) if k else ()

    def int_raw(self, n, k):
        c = n % self.field.p
        return (c,) + (0,) * (k - 1) if k else ()

    def reduce(self, x, k):
        if len(x) >= k:
            return tuple(x[:k])
        return tuple(x) + (0,) * (k - len(x))

    def add(self, x, y, k):
        if len(x) != k:
            x = self.reduce(x, k)
        if len(y) != k:
            y = self.reduce(y, k)
        F = self._field
        if F.p == 2:
            # digits in base 2: field addition is xor of the encodings
            return tuple(map(operator.xor, x, y))
        A = F.add
        return tuple(A[a][b] for a, b in zip(x, y))

    def neg(self, x, k):
        F = self._field
        if F.p == 2:
            return self.reduce(x, k)
        Ng = F.neg
        return tuple(Ng[a] for a in self.reduce(x, k))

    def mul(self, x, y, k):
        return self.dot((x,), (y,), k)

    def dot(self, xs, ys, k):
        """sum_m xs[m] * ys[m] modulo level k, accumulated in one pass."""
        F = self._field
        M = F.mul
        out = [0] * k
        if F.p == 2:
            for x, y in zip(xs, ys):
                ly = len(y) if len(y) < k else k
                for i, a in enumerate(x[:k]):
                    if a:
                        row = M[a]
                        for j, b in enumerate(y[:min(ly, k - i)], i):
                            if b:
                                out[j] ^= row[b]
            return tuple(out)
        A = F.add
        for x, y in zip(xs, ys):
            ly = len(y) if len(y) < k else k
            for i, a in enumerate(x[:k]):
                if a:
                    row = M[a]
                    for j, b in enumerate(y[:min(ly, k - i)], i):
                        if b:
                            out[j] = A[out[j]][row[b]]
        return tuple(out)

    def val(self, x, k):
        for i in range(min(k, len(x))):
            if x[i]:
                return i
        return None

    def inv(self, x, k):
        if k == 0:
            return ()
        if not x or x[0] == 0:
            raise NotAUnit("power series with zero constant term is not a unit")
        F = self.field
        c0 = F.inv[x[0]]
        out = [0] * k
        out[0] = c0
        for n in range(1, k):
            s = 0
            for i in range(1, min(n, len(x) - 1) + 1):
                s = F.add[s][F.mul[x[i]][out[n - i]]]
            out[n] = F.mul[F.neg[s]][c0]
        return tuple(out)

    def random_raw(self, rng, k, v):
        q = self.q
        if v is None:
            return tuple(rng.randrange(q) for _ in range(k))
        return (0,) * v + (rng.randrange(1, q),) + tuple(rng.randrange(q) for _ in range(k - v - 1))

    def uniformiser_raw(self, k):
        return self.reduce((0, 1), k)

    def divide_pi(self, x, j, k):
        if any(x[:j]):
            raise PrecisionError(f"series is not divisible by pi^{j}")
        return self.reduce(x[j:], k)

    def split_uniformiser(self, x, k):
        v = self.val(x, k)
        if v is None:
            raise NotAUnit("zero has no uniformiser factorisation")
        return self.reduce(x[v:k], k), v

    def from_payload(self, payload, k):
        if isinstance(payload, int) and not isinstance(payload, bool):
            payload = [payload % self.field.p]
        if not isinstance(payload, (list, tuple)):
            raise TypeError(f"FqSeries literal must be a coefficient list, got {payload!r}")
        for c in payload:
            if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < self.q:
                raise ValueError(f"coefficient {c!r} is not an element of F_{self.q}")
        return self.reduce(tuple(payload), k)

    def to_payload(self, x):
        return list(x)

    def describe(self):
        return {"kind": "FqSeries", "q": self.q, "N": self.N}

    def __str__(self):
        return f"FqSeries({self.q},{self.N})"


@dataclass(frozen=True)
class Matrix(Ring):
    n: int
    inner: Ring

    kind = "Matrix"
    is_dvr = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix size must be >= 1")

    @property
    def N(self):
        return self.inner.N

    def zero_raw(self, k):
        z = self.inner.zero_raw(k)
        return tuple(tuple(z for _ in range(self.n)) for _ in range(self.n))

    def one_raw(self, k):
        z, o = self.inner.zero_raw(k), self.inner.one_raw(k)
        return tuple(tuple(o if i == j else z for j in range(self.n)) for i in range(self.n))

    def int_raw(self, n, k):
        z, c = self.inner.zero_raw(k), self.inner.int_raw(n, k)
        return tuple(tuple(c if i == j else z for j in range(self.n)) for i in range(self.n))

    def reduce(self, x, k):
        R = self.inner
        return tuple(tuple(R.reduce(a, k) for a in row) for row in x)

    def add(self, x, y, k):
        R = self.inner
        return tuple(tuple(R.add(a, b, k) for a, b in zip(r, s)) for r, s in zip(x, y))

    def neg(self, x, k):
        R = self.inner
        return tuple(tuple(R.neg(a, k) for a in row) for row in x)

    def dot(self, xs, ys, k):
        R, n = self.inner, self.n
        if isinstance(R, Zp):
            m = R.p ** k
            return tuple(tuple(sum(x[i][l] * y[l][j] for x, y in zip(xs, ys) for l in range(n)) % m
                               for j in range(n)) for i in range(n))
        if isinstance(R, FqSeries):
            return tuple(tuple(R.dot([x[i][l] for x in xs for l in range(n)],
                                     [y[l][j] for y in ys for l in range(n)], k)
                               for j in range(n)) for i in range(n))
        return Ring.dot(self, xs, ys, k)

    def mul(self, x, y, k):
        R, n = self.inner, self.n
        if isinstance(R, Zp):
            m = R.p ** k
            cols = tuple(zip(*y))
            return tuple(tuple(sum(a * b for a, b in zip(row, col)) % m for col in cols)
                         for row in x)
        if isinstance(R, FqSeries):
            cols = tuple(zip(*y))
            return tuple(tuple(R.dot(row, col, k) for col in cols) for row in x)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = R.mul(x[i][0], y[0][j], k)
                for m in range(1, n):
                    acc = R.add(acc, R.mul(x[i][m], y[m][j], k), k)
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def val(self, x, k):
        R = self.inner
        best = None
        for row in x:
            for a in row:
                v = R.val(a, k)
                if v is not None and (best is None or v < best):
                    best = v
                    if v == 0:
                        return 0
        return best

    def inv(self, x, k):
        R, n = self.inner, self.n
        A = [list(row) for row in x]
        B = [list(row) for row in self.one_raw(k)]
        for col in range(n):
            piv = pinv = None
            for r in range(col, n):
                try:
                    pinv = R.inv(A[r][col], k)
                    piv = r
                    break
                except NotAUnit:
                    continue
            if piv is None:
                raise NotAUnit("matrix residue is singular")
            A[col], A[piv] = A[piv], A[col]
            B[col], B[piv] = B[piv], B[col]
            A[col] = [R.mul(pinv, a, k) for a in A[col]]
            B[col] = [R.mul(pinv, b, k) for b in B[col]]
            for r in range(n):
                if r != col:
                    c = A[r][col]
                    A[r] = [R.sub(a, R.mul(c, b, k), k) for a, b in zip(A[r], A[col])]
                    B[r] = [R.sub(a, R.mul(c, b, k), k) for a, b in zip(B[r], B[col])]
        return tuple(tuple(row) for row in B)

    def random_raw(self, rng, k, v):
        R, n = self.inner, self.n
        if v is None:
            return tuple(tuple(R.random_raw(rng, k, None) for _ in range(n)) for _ in range(n))
        grid = []
        for _ in range(n):
            row = []
            for _ in range(n):
                w = rng.randint(v, k)
                row.append(R.zero_raw(k) if w >= k else R.random_raw(rng, k, w))
            grid.append(row)
        i, j = rng.randrange(n), rng.randrange(n)
        grid[i][j] = R.random_raw(rng, k, v)
        return tuple(tuple(row) for row in grid)

    def uniformiser_raw(self, k):
        if not getattr(self.inner, "is_dvr", False):
            raise NoUniformiser(f"{self} is not a matrix ring over a DVR")
        z, u = self.inner.zero_raw(k), self.inner.uniformiser_raw(k)
        return tuple(tuple(u if i == j else z for j in range(self.n)) for i in range(self.n))

    def divide_pi(self, x, j, k):
        R = self.inner
        return tuple(tuple(R.divide_pi(a, j, k) for a in row) for row in x)

    def split_uniformiser(self, x, k):
        v = self.val(x, k)
        if v is None:
            raise NotAUnit("zero has no uniformiser factorisation")
        R = self.inner
        b = []
        for row in x:
            out = []
            for a in row:
                av = R.val(a, k)
                if av is None:
                    out.append(R.zero_raw(k))
                else:
                    bb, av = R.split_uniformiser(a, k)
                    out.append(R.mul(bb, _raw_pi_power(R, av - v, k), k))
            b.append(tuple(out))
        return tuple(b), v

    def from_payload(self, payload, k):
        if not isinstance(payload, (list, tuple)) or len(payload) != self.n:
            raise ValueError(f"expected {self.n} rows for {self}")
        rows = []
        for row in payload:
            if not isinstance(row, (list, tuple)) or len(row) != self.n:
                raise ValueError(f"expected {self.n} entries per row for {self}")
            rows.append(tuple(self.inner.from_payload(a, k) for a in row))
        return tuple(rows)

    def to_payload(self, x):
        return [[self.inner.to_payload(a) for a in row] for row in x]

    def describe(self):
        return {"kind": "Matrix", "n": self.n, "inner": self.inner.describe()}

    # -- matrix-specific helpers ---------------------------------------------
    def unit(self, i, j, prec=None):
        """Matrix unit e_ij (0-based indices)."""
        k = self.N if prec is None else prec
        z, o = self.inner.zero_raw(k), self.inner.one_raw(k)
        raw = tuple(tuple(o if (r, c) == (i, j) else z for c in range(self.n))
                    for r in range(self.n))
        return Element(self, raw, k)

    def entry(self, e, i, j):
        return Element(self.inner, e.data[i][j], e.prec, exact=e.exact)

    def from_entries(self, grid):
        k = min(a.prec for row in grid for a in row)
        raw = tuple(tuple(self.inner.reduce(a.data, k) for a in row) for row in grid)
        exact = all(a.exact for row in grid for a in row)
        return Element(self, raw, k, exact=exact)

    def scalar(self, c):
        """c * identity for c in the inner ring."""
        z = self.inner.zero(c.prec)
        return self.from_entries([[c if i == j else z for j in range(self.n)]
                                  for i in range(self.n)])

    def __str__(self):
        return f"Matrix({self.n},{self.inner})"


@dataclass(frozen=True)
class Product(Ring):
    factors: Tuple[Ring, ...]

    kind = "Product"
    is_dvr = False

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a product needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def N(self):
        return min(f.N for f in self.factors)

    def zero_raw(self, k):
        return tuple(f.zero_raw(k) for f in self.factors)

    def one_raw(self, k):
        return tuple(f.one_raw(k) for f in self.factors)

    def int_raw(self, n, k):
        return tuple(f.int_raw(n, k) for f in self.factors)

    def reduce(self, x, k):
        return tuple(f.reduce(a, k) for f, a in zip(self.factors, x))

    def add(self, x, y, k):
        return tuple(f.add(a, b, k) for f, a, b in zip(self.factors, x, y))

    def neg(self, x, k):
        return tuple(f.neg(a, k) for f, a in zip(self.factors, x))

    def mul(self, x, y, k):
        return tuple(f.mul(a, b, k) for f, a, b in zip(self.factors, x, y))

    def dot(self, xs, ys, k):
        return tuple(f.dot([x[i] for x in xs], [y[i] for y in ys], k)
                     for i, f in enumerate(self.factors))

    def val(self, x, k):
        vals = [f.val(a, k) for f, a in zip(self.factors, x)]
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None

    def inv(self, x, k):
        return tuple(f.inv(a, k) for f, a in zip(self.factors, x))

    def random_raw(self, rng, k, v):
        if v is None:
            return tuple(f.random_raw(rng, k, None) for f in self.factors)
        parts = []
        for f in self.factors:
            w = rng.randint(v, k)
            parts.append(f.zero_raw(k) if w >= k else f.random_raw(rng, k, w))
        i = rng.randrange(len(self.factors))
        parts[i] = self.factors[i].random_raw(rng, k, v)
        return tuple(parts)

    def uniformiser_raw(self, k):
        first = self.factors[0]
        if any(f != first for f in self.factors):
            raise NoUniformiser("product factors are not all isomorphic")
        return tuple(f.uniformiser_raw(k) for f in self.factors)

    def divide_pi(self, x, j, k):
        return tuple(f.divide_pi(a, j, k) for f, a in zip(self.factors, x))

    def split_uniformiser(self, x, k):
        parts, ks = [], []
        for f, a in zip(self.factors, x):
            b, v = f.split_uniformiser(a, k)
            parts.append(b)
            ks.append(v)
        return tuple(parts), tuple(ks)

    def from_payload(self, payload, k):
        if not isinstance(payload, (list, tuple)) or len(payload) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} parts for {self}")
        return tuple(f.from_payload(a, k) for f, a in zip(self.factors, payload))

    def to_payload(self, x):
        return [f.to_payload(a) for f, a in zip(self.factors, x)]

    def describe(self):
        return {"kind": "Product", "factors": [f.describe() for f in self.factors]}

    def part(self, e, i):
        return Element(self.factors[i], e.data[i], e.prec, exact=e.exact)

    def from_parts(self, parts):
        k = min(a.prec for a in parts)
        raw = tuple(f.reduce(a.data, k) for f, a in zip(self.factors, parts))
        return Element(self, raw, k, exact=all(a.exact for a in parts))

    def __str__(self):
        return "Product(" + ",".join(str(f) for f in self.factors) + ")"


def _raw_pi_power(R, j, k):
    x = R.one_raw(k)
    u = R.uniformiser_raw(k)
    for _ in range(j):
        x = R.mul(x, u, k)
    return x


class Element:
    """A ring element known modulo filtration level ``prec``.

    ``exact`` marks the literal zero (and zeros derived from it), the only
    element whose valuation is reported as infinite.
    """

    __slots__ = ("ring", "data", "prec", "exact")

    def __init__(self, ring, data, prec, exact=False):
        self.ring = ring
        self.data = data
        self.prec = prec
        self.exact = exact

    # -- valuation -------------------------------------------------------------
    def val(self):
        if self.exact:
            return Level.infinity()
        v = self.ring.val(self.data, self.prec)
        if v is None:
            return Level.at_least(self.prec)
        return Level(v)

    def vlow(self):
        """Largest certified lower bound for the valuation (int or inf)."""
        if self.exact:
            return INFINITY
        v = self.ring.val(self.data, self.prec)
        return self.prec if v is None else v

    def is_zero(self):
        return self.exact or self.ring.val(self.data, self.prec) is None

    # -- arithmetic ---------------------------------------------------------------
    def _other(self, other):
        if isinstance(other, Element):
            if other.ring != self.ring:
                raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.exact:
            return other
        if other.exact:
            return self
        k = min(self.prec, other.prec)
        return Element(self.ring, self.ring.add(self.data, other.data, k), k)

    __radd__ = __add__

    def __neg__(self):
        if self.exact:
            return self
        return Element(self.ring, self.ring.neg(self.data, self.prec), self.prec)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    def __rmul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return _mul(other, self)

    def __pow__(self, n):
        result = self.ring.one()
        for _ in range(n):
            result = result * self
        return result

    def inverse(self):
        """Inverse of a unit, at the same precision."""
        try:
            raw = self.ring.inv(self.data, self.prec)
        except (NotAUnit, ValueError) as exc:
            raise NotAUnit(f"{self} is not a unit: {exc}") from None
        return Element(self.ring, raw, self.prec)

    def reduce(self, k):
        if k > self.prec and not self.exact:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {k}")
        return Element(self.ring, self.ring.reduce(self.data, k), k, exact=self.exact)

    def lift(self, k):
        """Zero-padded canonical lift to precision ``k`` (witness literals only)."""
        return Element(self.ring, self.ring.reduce(self.data, k), k, exact=self.exact)

    def divide_by_uniformiser(self, j):
        """Exact quotient by pi^j; the result is known to ``prec - j``."""
        if j == 0:
            return self
        if self.exact:
            return self.ring.zero(self.prec - j)
        if j > self.prec:
            raise PrecisionError("not enough precision to divide")
        k = self.prec - j
        return Element(self.ring, self.ring.divide_pi(self.data, j, k), k)

    # -- comparison ------------------------------------------------------------------
    def agrees(self, other, k=None):
        """Equality modulo the shared (or given) precision."""
        other = self._other(other)
        if k is None:
            k = min(self.prec, other.prec)
        return self.ring.reduce(self.data, k) == other.ring.reduce(other.data, k)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other, self.prec)
        if not isinstance(other, Element):
            return NotImplemented
        return (self.ring == other.ring and self.prec == other.prec
                and self.data == other.data)

    def __hash__(self):
        return hash((self.ring, self.prec, self.data))

    def to_json(self):
        payload = self.ring.to_payload(self.data)
        if self.prec == self.ring.N:
            return payload
        return {"prec": self.prec, "value": payload}

    def __repr__(self):
        tail = "" if self.prec == self.ring.N else f" mod level {self.prec}"
        return f"{self.ring.to_payload(self.data)}{tail}"


def _mul(a, b):
    R = a.ring
    if a.exact or b.exact:
        return R.zero()
    k = min(a.prec + b.vlow(), b.prec + a.vlow(), R.N)
    return Element(R, R.mul(a.data, b.data, k), k)


def mul_to(a, b, k):
    """a*b known modulo level min(k, certified level); skips valuations when the
    input precisions alone already certify level k."""
    R = a.ring
    if a.exact or b.exact:
        return R.zero(k)
    lvl = k
    if a.prec < k:
        lvl = min(lvl, a.prec + b.vlow())
    if b.prec < lvl:
        lvl = min(lvl, b.prec + a.vlow())
    lvl = min(lvl, R.N)
    return Element(R, R.mul(a.data, b.data, lvl), lvl)


def uniformiser(ring):
    """The normal uniformiser: p, pi, pi*I, or componentwise for products."""
    k = ring.N
    try:
        raw = ring.uniformiser_raw(k)
    except AttributeError:
        raise NoUniformiser(f"{ring} has no uniformiser") from None
    return Element(ring, raw, k)


def check_same(a, b):
    if a.ring != b.ring:
        raise DescriptorMismatch(f"{a.ring} vs {b.ring}")
