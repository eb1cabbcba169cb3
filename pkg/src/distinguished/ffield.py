"""Table-driven arithmetic in GF(p^m), plus small matrix routines over it.

Elements are encoded as integers 0 .. p^m - 1: the base-p digits of the code
(least significant first) are the coefficients of the residue polynomial
modulo a fixed monic irreducible.  All arithmetic goes through precomputed
numpy tables, so arrays of codes can be combined elementwise with fancy
indexing.
"""

from functools import lru_cache
from itertools import product

import numpy


class SingularMatrixError(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q):
    """Return (p, f) with q == p**f, or raise ValueError."""
    if q < 2:
        raise ValueError("%d is not a prime power" % q)
    p = 2
    while q % p:
        p += 1
    f = 0
    r = q
    while r % p == 0:
        r //= p
        f += 1
    if r != 1:
        raise ValueError("%d is not a prime power" % q)
    return p, f


def _poly_divides(a, b, p):
    # does monic a divide b? coefficient lists, low degree first
    b = list(b)
    da = len(a) - 1
    for i in range(len(b) - 1, da - 1, -1):
        c = b[i] % p
        if c:
            for j in range(da + 1):
                b[i - da + j] = (b[i - da + j] - c * a[j]) % p
    return not any(x % p for x in b[:da])


def _is_irreducible(poly, p):
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for low in product(range(p), repeat=d):
            if _poly_divides(list(low) + [1], poly, p):
                return False
    return True


def least_nonsquare(p):
    squares = {(x * x) % p for x in range(1, p)}
    return min(x for x in range(1, p) if x not in squares)


def default_modulus(p, m):
    """Monic irreducible of degree m over F_p, low coefficients first.

    Degree 2 uses x^2 - d with d the least quadratic nonresidue, so that the
    class of x is a square root of a nonsquare of F_p.  Other degrees take the
    lexicographically least irreducible.
    """
    if m == 1:
        return (0, 1)
    if m == 2 and p > 2:
        return ((-least_nonsquare(p)) % p, 0, 1)
    for low in product(range(p), repeat=m):
        poly = list(reversed(low)) + [1]
        if poly[0] and _is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")


class GF:
    """The field with p**m elements."""

    def __init__(self, p, m=1):
        if not is_prime(p):
            raise ValueError("%d is not prime" % p)
        self.p = p
        self.m = m
        self.order = p ** m
        self.modulus = default_modulus(p, m)
        Q = self.order

        codes = numpy.arange(Q)
        digits = numpy.zeros((Q, m), dtype=numpy.int64)
        for k in range(m):
            digits[:, k] = (codes // p ** k) % p
        self.digits = digits
        weights = p ** numpy.arange(m)

        s = (digits[:, None, :] + digits[None, :, :]) % p
        self.add_t = (s * weights).sum(axis=-1)
        self.neg_t = ((-digits) % p * weights).sum(axis=-1)
        self.sub_t = self.add_t[:, self.neg_t]

        self.gen = self._find_generator()
        exp = numpy.zeros(Q - 1, dtype=numpy.int64)
        x = 1
        for k in range(Q - 1):
            exp[k] = x
            x = self._mul_poly(x, self.gen)
        log = numpy.full(Q, -1, dtype=numpy.int64)
        log[exp] = numpy.arange(Q - 1)
        self.exp_t = exp
        self.log_t = log

        mul = numpy.zeros((Q, Q), dtype=numpy.int64)
        nz = codes[1:]
        la = log[nz]
        mul[1:, 1:] = exp[(la[:, None] + la[None, :]) % (Q - 1)]
        self.mul_t = mul
        inv = numpy.zeros(Q, dtype=numpy.int64)
        inv[1:] = exp[(-la) % (Q - 1)]
        self.inv_t = inv

    def __repr__(self):
        return "GF(%d^%d)" % (self.p, self.m)

    # -- construction helpers -------------------------------------------

    def _to_poly(self, a):
        return [(a // self.p ** k) % self.p for k in range(self.m)]

    def _from_poly(self, c):
        return sum(int(x) * self.p ** k for k, x in enumerate(c))

    def _mul_poly(self, a, b):
        p, m = self.p, self.m
        pa, pb = self._to_poly(a), self._to_poly(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(pa):
            if x:
                for j, y in enumerate(pb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for i in range(len(prod) - 1, m - 1, -1):
            c = prod[i]
            if c:
                for j in range(m + 1):
                    prod[i - m + j] = (prod[i - m + j] - c * mod[j]) % p
        return self._from_poly(prod[:m])

    def _find_generator(self):
        Q = self.order
        for g in range(1, Q):
            x, k = g, 1
            while x != 1:
                x = self._mul_poly(x, g)
                k += 1
            if k == Q - 1:
                return g
        raise AssertionError("multiplicative group is not cyclic?")

    # -- scalar arithmetic ------------------------------------------------

    def add(self, a, b):
        return self.add_t[a, b]

    def sub(self, a, b):
        return self.sub_t[a, b]

    def mul(self, a, b):
        return self.mul_t[a, b]

    def neg(self, a):
        return self.neg_t[a]

    def inv(self, a):
        if numpy.any(numpy.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in %r" % self)
        return self.inv_t[a]

    def power(self, a, e):
        """a**e elementwise (e may be negative for nonzero a)."""
        a = numpy.asarray(a)
        Q = self.order
        la = self.log_t[a]
        out = self.exp_t[(la * e) % (Q - 1)]
        if e > 0:
            out = numpy.where(a == 0, 0, out)
        elif e == 0:
            out = numpy.ones_like(a)
        return out if out.ndim else int(out)

    def dlog(self, a):
        if a == 0:
            raise ValueError("discrete log of zero")
        return int(self.log_t[a])

    def element(self, k):
        """gen**k"""
        return int(self.exp_t[k % (self.order - 1)])

    def element_order(self, a):
        from math import gcd
        return (self.order - 1) // gcd(self.dlog(a), self.order - 1)

    @lru_cache(maxsize=None)
    def frobenius_table(self, e):
        """Table of x -> x**(p**e)."""
        return self.power(numpy.arange(self.order), self.p ** e)

    @lru_cache(maxsize=None)
    def trace_table(self):
        """Absolute trace GF(p^m) -> F_p, as integers 0..p-1."""
        codes = numpy.arange(self.order)
        acc = numpy.zeros(self.order, dtype=numpy.int64)
        for e in range(self.m):
            acc = self.add_t[acc, self.frobenius_table(e)[codes]]
        assert numpy.all(acc < self.p)
        return acc

    # -- matrices (numpy arrays of codes, batched along leading axes) -----

    def identity(self, n):
        return numpy.eye(n, dtype=numpy.int64)

    def diag(self, entries):
        n = len(entries)
        out = numpy.zeros((n, n), dtype=numpy.int64)
        out[range(n), range(n)] = entries
        return out

    def matmul(self, A, B):
        n = A.shape[-1]
        out = None
        for k in range(n):
            term = self.mul_t[A[..., :, k, None], B[..., None, k, :]]
            out = term if out is None else self.add_t[out, term]
        return out

    def matinv(self, A):
        """Gauss-Jordan inverse of a single square matrix."""
        n = A.shape[0]
        M = numpy.concatenate([A, self.identity(n)], axis=1).copy()
        for col in range(n):
            piv = None
            for row in range(col, n):
                if M[row, col]:
                    piv = row
                    break
            if piv is None:
                raise SingularMatrixError("matrix is singular")
            if piv != col:
                M[[col, piv]] = M[[piv, col]]
            M[col] = self.mul_t[self.inv_t[M[col, col]], M[col]]
            for row in range(n):
                c = M[row, col]
                if row != col and c:
                    M[row] = self.sub_t[M[row], self.mul_t[c, M[col]]]
        return M[:, n:]

    def is_invertible(self, A):
        try:
            self.matinv(A)
        except SingularMatrixError:
            return False
        return True

    def matpow(self, A, e):
        n = A.shape[-1]
        result = self.identity(n)
        base = A
        while e:
            if e & 1:
                result = self.matmul(result, base)
            base = self.matmul(base, base)
            e >>= 1
        return result


@lru_cache(maxsize=None)
def field(p, m=1):
    """Shared, cached GF(p^m) instance."""
    return GF(p, m)
