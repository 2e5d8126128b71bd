"""Finite fields F_q as F_p[w]/(g(w)) with a fixed defining polynomial per q.

An element is encoded as the integer sum(c_j * p**j) where c_0 + c_1 w + ...
is its reduced polynomial in w.  For q = p the encoding is the residue itself.
The defining polynomials are Conway polynomials, so literals are reproducible.
"""

import functools

# monic, coefficients listed from the constant term upwards
DEFINING_POLYNOMIALS = {
    4: (1, 1, 1),            # w^2 + w + 1
    8: (1, 1, 0, 1),         # w^3 + w + 1
    16: (1, 1, 0, 0, 1),     # w^4 + w + 1
    32: (1, 0, 1, 0, 0, 1),  # w^5 + w^2 + 1
    9: (2, 2, 1),            # w^2 + 2w + 2
    27: (1, 2, 0, 1),        # w^3 + 2w + 1
    25: (2, 4, 1),           # w^2 + 4w + 2
    49: (3, 6, 1),           # w^2 + 6w + 3
}


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            return (p, e) if r == 1 and _is_prime(p) else (None, None)
    return None, None


class GF:
    """Arithmetic tables for F_q.  Use :func:`gf` to get the shared instance."""

    def __init__(self, q):
        p, e = _prime_power(q)
        if p is None:
            raise ValueError(f"q = {q} is not a prime power")
        if e > 1 and q not in DEFINING_POLYNOMIALS:
            raise ValueError(f"F_{q} is not supported; known q: "
                             f"primes and {sorted(DEFINING_POLYNOMIALS)}")
        self.q, self.p, self.e = q, p, e
        self.modulus = DEFINING_POLYNOMIALS.get(q, (0, 1))
        digits = [self._digits(x) for x in range(q)]
        self.add = [[self._encode([(a + b) % p for a, b in zip(digits[x], digits[y])])
                     for y in range(q)] for x in range(q)]
        self.neg = [self._encode([(-a) % p for a in digits[x]]) for x in range(q)]
        self.mul = [[self._polymul(digits[x], digits[y]) for y in range(q)]
                    for x in range(q)]
        self.inv = [0] * q
        for x in range(1, q):
            for y in range(1, q):
                if self.mul[x][y] == 1:
                    self.inv[x] = y
                    break
        # frobenius x -> x^p
        self.frob = [self.power(x, p) for x in range(q)]

    def _digits(self, x):
        out = []
        for _ in range(self.e):
            x, d = divmod(x, self.p)
            out.append(d)
        return out

    def _encode(self, digits):
        x = 0
        for d in reversed(digits):
            x = x * self.p + d
        return x

    def _polymul(self, a, b):
        p, e = self.p, self.e
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        g = self.modulus
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k]
            if c:
                for j in range(e + 1):
                    prod[k - e + j] = (prod[k - e + j] - c * g[j]) % p
        return self._encode(prod[:e])

    def power(self, x, n):
        r = 1
        for _ in range(n):
            r = self.mul[r][x]
        return r

    def frobenius(self, x, j):
        """x -> x^(p^j); j is taken modulo the degree e."""
        for _ in range(j % self.e):
            x = self.frob[x]
        return x

    def sub(self, x, y):
        return self.add[x][self.neg[y]]

    def __repr__(self):
        return f"GF({self.q})"


@functools.lru_cache(maxsize=None)
def gf(q):
    return GF(q)
