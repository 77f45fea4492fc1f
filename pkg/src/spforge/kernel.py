"""Vectorised whole-field scans backed by numpy.

The exhaustive oracles sweep every element of fields with up to a few
million elements; per-element Python arithmetic is far too slow for that.
``FieldTables`` keeps, for one field, the coefficient vector of every code
plus discrete log/exp tables, and offers array versions of the field
operations and of F_p-linear maps such as Frobenius.
"""

from functools import lru_cache

import numpy as np
from sympy import primefactors

from .galois import embedding, field_create, prime_power

# tables for larger fields cost hundreds of MB
MAX_TABLE_ORDER = 50_000_000


class FieldTables:
    def __init__(self, field):
        N = field.order
        if N > MAX_TABLE_ORDER:
            raise ValueError(f"field of order {N} is too large for table scans")
        self.field = field
        self.p, self.m, self.N = field.p, field.r, N
        p, m = self.p, self.m
        self.pw = p ** np.arange(m, dtype=np.int64)
        codes = np.arange(N, dtype=np.int64)
        digit_type = np.uint8 if p <= 256 else np.int64
        self.digits = ((codes[:, None] // self.pw) % p).astype(digit_type)
        self.exp, self.log = self._build_exp_log()

    def _linear_map_of(self, images):
        """Matrix (rows = output coords) whose column j is the vector of images[j]."""
        return np.array([self.field.coeffs(c) for c in images], dtype=np.int64).T

    def mul_matrix(self, h):
        F = self.field
        return self._linear_map_of([F.mul(h, F.pow(F.gen().code, j)) for j in range(self.m)])

    def frobenius_matrix(self, s):
        """Matrix of x -> x^(p^s)."""
        F = self.field
        t = F.gen().code
        e = self.p ** s
        return self._linear_map_of([F.pow(F.pow(t, j), e) for j in range(self.m)])

    def apply(self, mat, codes=None):
        """Coefficient vectors of mat applied to each code (all codes by default)."""
        D = self.digits if codes is None else self.digits[codes]
        return (D.astype(np.int64) @ mat.T) % self.p

    def pack(self, vecs):
        return vecs.astype(np.int64) @ self.pw

    def _build_exp_log(self):
        F, N = self.field, self.N
        exp = np.zeros(N - 1, dtype=np.int64)
        exp[0] = 1
        if N > 2:
            g = F.primitive_element()
            filled, h = 1, g
            while filled < N - 1:
                take = min(filled, N - 1 - filled)
                exp[filled:filled + take] = self.pack(self.apply(self.mul_matrix(h), exp[:take]))
                filled += take
                h = F.mul(h, h)
        log = np.full(N, -1, dtype=np.int64)
        log[exp] = np.arange(N - 1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise AssertionError("exp table does not cover the multiplicative group")
        return exp, log

    # -- array arithmetic ------------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        s = self.digits[a].astype(np.int64) + self.digits[b]
        return self.pack(s % self.p)

    def neg(self, a):
        return self.pack((-self.digits[a].astype(np.int64)) % self.p)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out[nz] = self.exp[(self.log[a[nz]] + self.log[b[nz]]) % (self.N - 1)]
        return out

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[a]) % (self.N - 1)]

    def evaluate(self, coeffs, xs=None):
        """Evaluate a polynomial (codes, constant first) at xs (default: every element)."""
        if xs is None:
            xs = np.arange(self.N, dtype=np.int64)
        acc = np.zeros(len(xs), dtype=np.int64)
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, xs), np.full(len(xs), c, dtype=np.int64))
        return acc


@lru_cache(maxsize=4)
def tables(field):
    return FieldTables(field)


def reducible_alpha_mask(field):
    """Boolean mask over codes: True where x^2 - a x + 1 has a root in ``field``.

    x^2 - a x + 1 has a root b iff a = b + 1/b, so the mask is the image of
    b -> b + 1/b over the nonzero elements.
    """
    T = tables(field)
    if T.N == 2:
        beta = np.array([1], dtype=np.int64)
    else:
        beta = T.exp
    alpha = T.add(beta, T.inv(beta))
    mask = np.zeros(T.N, dtype=bool)
    mask[alpha] = True
    return mask


def reducible_alpha_mask_by_discriminant(field):
    """Per-element test of x^2 - a x + 1 for reducibility over ``field``.

    Odd characteristic: reducible iff a^2 - 4 is a square (or zero).
    Characteristic 2: x^2 + a x + 1 is (x + 1)^2 for a = 0; otherwise the
    substitution x = a y gives y^2 + y + 1/a^2, which splits iff the absolute
    trace of 1/a^2 vanishes.
    """
    T = tables(field)
    a = np.arange(T.N, dtype=np.int64)
    if T.p != 2:
        four = np.full(T.N, 4 % T.p, dtype=np.int64)
        disc = T.add(T.mul(a, a), T.neg(four))
        return (disc == 0) | ((disc != 0) & (T.log[disc] % 2 == 0))
    mask = a == 0
    nz = a[1:]
    c = T.inv(T.mul(nz, nz))
    phi = T.frobenius_matrix(1)
    S = np.zeros_like(phi)
    P = np.eye(T.m, dtype=np.int64)
    for _ in range(T.m):
        S = (S + P) % 2
        P = (phi @ P) % 2
    mask[1:] = ~T.apply(S, c).any(axis=1)
    return mask


def _tower(q, n):
    p, r = prime_power(q)
    return p, r, field_create(p, r * n)


def trace_nonzero_mask(q, n):
    """Mask over F_{q^n}: relative trace to F_q is nonzero."""
    p, r, big = _tower(q, n)
    T = tables(big)
    phi = T.frobenius_matrix(r)
    S = np.zeros_like(phi)
    P = np.eye(T.m, dtype=np.int64)
    for _ in range(n):
        S = (S + P) % p
        P = (phi @ P) % p
    return T.apply(S).any(axis=1)


def full_degree_mask(q, n):
    """Mask over F_{q^n}: the element generates F_{q^n} over F_q."""
    p, r, big = _tower(q, n)
    T = tables(big)
    mask = np.ones(T.N, dtype=bool)
    for s in primefactors(n):
        d = n // s
        phi_d = T.frobenius_matrix(r * d)
        fixed = ~T.apply((phi_d - np.eye(T.m, dtype=np.int64)) % p).any(axis=1)
        mask &= ~fixed
    return mask


def count_reducible_alpha_scan(q, n):
    """Exhaustive count of a in F_{q^n} with x^2 - a x + 1 reducible over F_{q^n},
    testing each a on its own."""
    _, _, big = _tower(q, n)
    return int(reducible_alpha_mask_by_discriminant(big).sum())


def count_valid_alpha(q, n, require_full_degree=True):
    """Exhaustive count of a in F_{q^n} with nonzero trace to F_q and
    x^2 - a x + 1 irreducible over F_{q^n}; by default a must also have
    degree exactly n over F_q."""
    _, _, big = _tower(q, n)
    mask = trace_nonzero_mask(q, n) & ~reducible_alpha_mask(big)
    if require_full_degree:
        mask &= full_degree_mask(q, n)
    return int(mask.sum())


def roots_in(poly, big):
    """Codes of all roots in ``big`` of a MonicPoly defined over a subfield."""
    emb = embedding(poly.field, big)
    coeffs = [emb.image(c) for c in poly.full]
    vals = tables(big).evaluate(coeffs)
    return [int(x) for x in np.flatnonzero(vals == 0)]
