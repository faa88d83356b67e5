"""Exact integer/rational linear algebra on numpy object arrays.

Ranks and kernels use fraction-free (Bareiss) elimination over Python
integers; a modular mode works over a random 62-bit prime instead and is
only probabilistically correct.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .rng import SplitMix64


def as_int_matrix(m, cols=None):
    """Object array of Python ints; rational rows are scaled by their
    denominators (which does not change rank or kernel)."""
    a = np.array(m, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else np.zeros((0, cols or 0), dtype=object)
    if a.size == 0:
        return np.zeros(a.shape, dtype=object)
    out = np.empty(a.shape, dtype=object)
    for i in range(a.shape[0]):
        row = a[i]
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out[i] = [int(x * den) for x in row]
    return out


def bareiss_rank(m) -> int:
    a = as_int_matrix(m).copy()
    rows, cols = a.shape
    r, prev = 0, 1
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = a[r, c]
        if r + 1 < rows:
            a[r + 1:, c + 1:] = (piv * a[r + 1:, c + 1:] - np.outer(a[r + 1:, c], a[r, c + 1:])) // prev
            a[r + 1:, c] = 0
        prev = piv
        r += 1
    return r


def integer_rref(m):
    """Fraction-free Gauss-Jordan.  Returns (A, pivots, d) with A = d * RREF(m)
    on its first len(pivots) rows."""
    a = as_int_matrix(m).copy()
    rows, cols = a.shape
    pivots = []
    r, prev = 0, 1
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = a[r, c]
        others = np.array([j for j in range(rows) if j != r], dtype=int)
        if others.size:
            a[others] = (piv * a[others] - np.outer(a[others, c], a[r])) // prev
        prev = piv
        pivots.append(c)
        r += 1
    d = prev
    if d < 0:
        a = -a
        d = -d
    return a, pivots, d


def nullspace(m, ncols=None):
    """Integer basis of the right kernel, as columns of an (n, n - rank) array."""
    a = as_int_matrix(m, cols=ncols)
    n = a.shape[1] if a.size or ncols is None else ncols
    if a.shape[0] == 0:
        return np.eye(n, dtype=int).astype(object)
    red, pivots, d = integer_rref(a)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=object)
    for j, f in enumerate(free):
        basis[f, j] = d
        for i, pc in enumerate(pivots):
            basis[pc, j] = -red[i, f]
        g = 0
        for x in basis[:, j]:
            g = gcd(g, int(x))
        if g > 1:
            basis[:, j] //= g
    return basis


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(seed=0, bits=62):
    rng = SplitMix64(seed)
    while True:
        cand = (rng.next_u64() >> (64 - bits)) | (1 << (bits - 1)) | 1
        if _is_probable_prime(cand):
            return cand


def modular_rank(m, p) -> int:
    a = as_int_matrix(m) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        if r + 1 < rows:
            a[r + 1:] = (a[r + 1:] - np.outer(a[r + 1:, c], a[r])) % p
        r += 1
    return r


def rank(m, mode="exact", prime=None) -> int:
    a = np.asarray(m, dtype=object)
    if a.size == 0:
        return 0
    if mode == "exact":
        return bareiss_rank(a)
    if mode == "modular":
        return modular_rank(a, prime or random_prime())
    raise ValueError(f"unknown rank mode {mode!r}")


def _max_abs(a):
    return max((abs(int(x)) for x in a.flat), default=0)


def _int_dot(x, y):
    """Exact integer product; uses int64 when no overflow is possible."""
    inner = x.shape[-1] if x.ndim else 1
    if _max_abs(x) * _max_abs(y) * max(inner, 1) < 2**62:
        return x.astype(np.int64).dot(y.astype(np.int64)).astype(object)
    return x.dot(y)


class RationalMatrix:
    """Exact rational matrix stored as integer numerators over one common
    denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = np.array(num, dtype=object)
        if den < 0:
            num, den = -num, -den
        g = den
        for x in num.flat:
            if g == 1:
                break
            g = gcd(g, int(x))
        if g > 1:
            num = num // g
            den //= g
        self.num = num
        self.den = den

    @classmethod
    def from_fractions(cls, m):
        m = np.array(m, dtype=object)
        den = 1
        for x in m.flat:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        num = np.empty(m.shape, dtype=object)
        for idx, x in np.ndenumerate(m):
            num[idx] = int(Fraction(x) * den)
        return cls(num, den)

    @classmethod
    def diag_inverse(cls, entries):
        den = 1
        for e in entries:
            den = lcm(den, int(e))
        n = len(entries)
        num = np.zeros((n, n), dtype=object)
        for i, e in enumerate(entries):
            num[i, i] = den // int(e)
        return cls(num, den)

    @property
    def shape(self):
        return self.num.shape

    @property
    def T(self):
        return RationalMatrix(self.num.T.copy(), self.den)

    def __matmul__(self, other):
        if not isinstance(other, RationalMatrix):
            other = RationalMatrix(other)
        return RationalMatrix(_int_dot(self.num, other.num), self.den * other.den)

    def __rmatmul__(self, other):
        return RationalMatrix(other).__matmul__(self)

    def __add__(self, other):
        if not isinstance(other, RationalMatrix):
            other = RationalMatrix(other)
        den = lcm(self.den, other.den)
        return RationalMatrix(self.num * (den // self.den) + other.num * (den // other.den), den)

    def __neg__(self):
        return RationalMatrix(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other if isinstance(other, RationalMatrix) else -RationalMatrix(other))

    def scale(self, q):
        q = Fraction(q)
        return RationalMatrix(self.num * q.numerator, self.den * q.denominator)

    def is_zero(self):
        return not any(x != 0 for x in self.num.flat)

    def max_abs(self):
        """Largest entry magnitude as an exact Fraction."""
        best = 0
        for x in self.num.flat:
            if abs(x) > best:
                best = abs(x)
        return Fraction(best, self.den)

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            other = RationalMatrix(other)
        return self.shape == other.shape and (self - other).is_zero()

    __hash__ = None

    def to_float(self):
        return self.num.astype(float) / self.den

    def entry(self, i, j):
        return Fraction(int(self.num[i, j]), self.den)
