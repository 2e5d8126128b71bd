"""Independent reference arithmetic for the tests.

Nothing here imports skewps: integers mod p^k, 2x2 integer matrices, F_4 as
pairs over F_2 and a naive skew-polynomial product.
"""


def ext_gcd_inverse(a, m):
    """Inverse of a modulo m by the extended Euclidean algorithm."""
    r0, r1, s0, s1 = m, a % m, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise ValueError("not invertible")
    return s0 % m


def padic_val(a, p, k):
    a %= p ** k
    if a == 0:
        return None
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


# -- integer matrices ---------------------------------------------------------------------

def mat(rows):
    return [list(r) for r in rows]


def mat_mul(A, B, m):
    n = len(A)
    return [[sum(A[i][l] * B[l][j] for l in range(n)) % m for j in range(n)] for i in range(n)]


def mat_add(A, B, m):
    return [[(a + b) % m for a, b in zip(r, s)] for r, s in zip(A, B)]


def mat_sub(A, B, m):
    return [[(a - b) % m for a, b in zip(r, s)] for r, s in zip(A, B)]


def mat_unit(i, j, n=2):
    return [[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)]


def mat_scale(c, A, m):
    return [[c * a % m for a in r] for r in A]


def mat_zero(n=2):
    return [[0] * n for _ in range(n)]


# -- F_4 = F_2[w]/(w^2 + w + 1), element a + b w encoded as a + 2b ---------------------------

def f4_mul(x, y):
    a, b = x & 1, x >> 1
    c, d = y & 1, y >> 1
    # (a + b w)(c + d w) = ac + (ad + bc) w + bd w^2,  w^2 = w + 1
    const = (a * c + b * d) % 2
    lin = (a * d + b * c + b * d) % 2
    return const + 2 * lin


def f4_add(x, y):
    return x ^ y


def fq_series_mul(xs, ys, k, add=f4_add, mul=f4_mul):
    out = [0] * k
    for i, a in enumerate(xs[:k]):
        for j, b in enumerate(ys[:k - i]):
            out[i + j] = add(out[i + j], mul(a, b))
    return out


# -- skew polynomials ----------------------------------------------------------------------

def skew_mul(a, b, sigma, delta, add, mul, zero):
    """Naive product of sum a_i x^i and sum b_j x^j with x c = sigma(c) x + delta(c)."""
    out = [zero] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        # x^i * bj as a polynomial, built one x at a time
        poly = [bj]
        for i, ai in enumerate(a):
            if i:
                nxt = [zero] * (len(poly) + 1)
                for k, c in enumerate(poly):
                    nxt[k + 1] = add(nxt[k + 1], sigma(c))
                    nxt[k] = add(nxt[k], delta(c))
                poly = nxt
            for k, c in enumerate(poly):
                out[k + j] = add(out[k + j], mul(ai, c))
    return out


def skew_power(f, n, sigma, delta, add, mul, zero, one):
    out = [one]
    for _ in range(n):
        out = skew_mul(out, f, sigma, delta, add, mul, zero)
    return out
