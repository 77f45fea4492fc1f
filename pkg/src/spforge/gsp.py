"""The general symplectic group GSp_2n(F_l) on F_l^{2n}.

The form is fixed as <x, y> = x^T J y with J = [[0, I_n], [-I_n, 0]], so
e_i pairs with e_{n+i}.  Group elements act on column vectors.

Besides membership, multipliers and transvections this module realizes an
irreducible symplectic polynomial as a matrix in Sp_2n, enumerates the
subgroup generated by a list of elements, and sorts transvection-containing
subgroups into the reducible / imprimitive / contains-Sp cases.
"""

import os
from dataclasses import dataclass
from math import prod

import numpy as np
from sympy import isprime

from . import linalg as la
from .errors import (CapExceeded, NoInvariantForm, NotGSp, NotIndependent,
                     NotIrreducible, NotPrime, NoTransvection, NotSymplectic,
                     OutsideTrichotomy, Unsupported, ZeroScalar, ZeroVector)
from .galois import field_create
from .poly import MonicPoly, is_irreducible, is_symplectic

DEFAULT_CLOSURE_CAP = 100_000


def closure_cap(cap=None):
    if cap is not None:
        return cap
    return int(os.environ.get("FORGE_CAP", DEFAULT_CLOSURE_CAP))


@dataclass(frozen=True)
class SympSpace:
    ell: int
    n: int

    def __post_init__(self):
        if not isprime(self.ell):
            raise NotPrime(f"{self.ell} is not prime")
        if self.n < 1:
            raise ValueError("half-dimension must be >= 1")

    @property
    def dim(self):
        return 2 * self.n

    @property
    def J(self):
        n, l = self.n, self.ell
        rows = []
        for i in range(2 * n):
            row = [0] * (2 * n)
            if i < n:
                row[n + i] = 1
            else:
                row[i - n] = l - 1
            rows.append(tuple(row))
        return tuple(rows)

    def pair(self, x, y):
        n, l = self.n, self.ell
        return sum(x[i] * y[n + i] - x[n + i] * y[i] for i in range(n)) % l

    def basis_vector(self, i):
        return tuple(int(j == i) for j in range(self.dim))

    def gram(self, W):
        return tuple(tuple(self.pair(u, v) for v in W) for u in W)


def _form_image(M, space):
    l = space.ell
    return la.mat_mul(la.mat_mul(la.transpose(M), space.J, l), M, l)


def multiplier(M, space):
    """The m with M^T J M = m J; NotGSp when there is none."""
    M = la.as_matrix(M, space.ell)
    d = space.dim
    if len(M) != d or any(len(row) != d for row in M):
        raise NotGSp(f"expected a {d}x{d} matrix")
    image = _form_image(M, space)
    m = image[0][space.n]
    if m == 0 or image != la.scale(space.J, m, space.ell):
        raise NotGSp("matrix does not scale the symplectic form")
    return m


@dataclass(frozen=True)
class GSpElement:
    space: SympSpace
    matrix: tuple
    multiplier: int

    def __post_init__(self):
        M = la.as_matrix(self.matrix, self.space.ell)
        object.__setattr__(self, "matrix", M)
        if multiplier(M, self.space) != self.multiplier:
            raise NotGSp("stored multiplier does not match the matrix")

    @classmethod
    def of(cls, M, space):
        M = la.as_matrix(M, space.ell)
        return cls(space, M, multiplier(M, space))

    def __matmul__(self, other):
        l = self.space.ell
        return GSpElement(self.space, la.mat_mul(self.matrix, other.matrix, l),
                          self.multiplier * other.multiplier % l)

    def __call__(self, v):
        return la.mat_vec(self.matrix, v, self.space.ell)

    @property
    def flat(self):
        return [x for row in self.matrix for x in row]

    @property
    def trace(self):
        return sum(self.matrix[i][i] for i in range(self.space.dim)) % self.space.ell

    def is_identity(self):
        return self.matrix == la.identity(self.space.dim)


def identity_element(space):
    return GSpElement(space, la.identity(space.dim), 1)


def make_transvection(space, v, lam=1):
    """x -> x + lam <x, v> v."""
    l = space.ell
    v = tuple(int(x) % l for x in v)
    if len(v) != space.dim:
        raise ValueError(f"vector must have length {space.dim}")
    if not any(v):
        raise ZeroVector("transvection direction must be nonzero")
    lam %= l
    if lam == 0:
        raise ZeroScalar("transvection scalar must be nonzero")
    # column j of T is e_j + lam <e_j, v> v
    cols = []
    for j in range(space.dim):
        c = lam * space.pair(space.basis_vector(j), v) % l
        cols.append([(int(i == j) + c * v[i]) % l for i in range(space.dim)])
    T = GSpElement(space, la.transpose(cols), 1)
    assert is_transvection(T)
    return T


def is_transvection(g):
    if g.multiplier != 1 or g.is_identity():
        return False
    l = g.space.ell
    N = la.mat_sub(g.matrix, la.identity(g.space.dim), l)
    return la.rank(N, l) == 1 and la.is_zero(la.mat_mul(N, N, l))


def char_poly(g):
    return char_poly_matrix(g.matrix, g.space.ell)


def char_poly_matrix(M, l):
    """det(x I - M) as a MonicPoly over F_l (Berkowitz, division free)."""
    d = len(M)
    coeffs = [1]  # highest degree first
    for r in range(d):
        a = M[r][r]
        R = [M[r][j] for j in range(r)]
        S = [M[i][r] for i in range(r)]
        col = [1, -a % l]
        vec = S
        for _ in range(r):
            col.append(-sum(x * y for x, y in zip(R, vec)) % l)
            vec = [sum(M[i][j] * vec[j] for j in range(r)) % l for i in range(r)]
        coeffs = [sum(col[i - j] * coeffs[j] for j in range(len(coeffs)) if 0 <= i - j < len(col)) % l
                  for i in range(r + 2)]
    F = field_create(l)
    return MonicPoly(F, list(reversed(coeffs))[:-1])


def companion_matrix(f):
    d = f.degree
    l = f.field.p
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i, a in enumerate(f.coeffs):
        rows[i][d - 1] = -a % l
    return la.as_matrix(rows, l)


def _invariant_forms(C, l):
    """Basis of alternating A (zero diagonal) with C^T A C = A."""
    d = len(C)
    slots = [(i, j) for i in range(d) for j in range(i + 1, d)]
    Ct = la.transpose(C)
    columns = []
    for i, j in slots:
        E = [[0] * d for _ in range(d)]
        E[i][j], E[j][i] = 1, l - 1
        img = la.mat_mul(la.mat_mul(Ct, E, l), C, l)
        columns.append([(img[a][b] - E[a][b]) % l for a, b in slots])
    system = la.transpose(columns)
    forms = []
    for v in la.nullspace(system, l):
        A = [[0] * d for _ in range(d)]
        for (i, j), x in zip(slots, v):
            A[i][j], A[j][i] = x, -x % l
        forms.append(la.as_matrix(A, l))
    return forms


def _symplectic_basis(A, n, l):
    """P with P^T A P = J (symplectic Gram-Schmidt); columns e_1..e_n, f_1..f_n."""
    d = 2 * n

    def B(x, y):
        return sum(x[i] * A[i][j] * y[j] for i in range(d) for j in range(d)) % l

    pool = [tuple(int(i == j) for i in range(d)) for j in range(d)]
    es, fs = [], []
    while pool:
        e = pool.pop(0)
        k = next((k for k, w in enumerate(pool) if B(e, w)), None)
        if k is None:
            raise NoInvariantForm("form is degenerate")
        w = pool.pop(k)
        c = pow(B(e, w), -1, l)
        f = tuple(x * c % l for x in w)
        es.append(e)
        fs.append(f)
        nxt = []
        for x in pool:
            bxf, bxe = B(x, f), B(x, e)
            y = tuple((xi - bxf * ei + bxe * fi) % l for xi, ei, fi in zip(x, e, f))
            if any(y):
                nxt.append(y)
        pool = nxt
    if len(es) != n:
        raise NoInvariantForm("form is degenerate")
    return la.transpose(es + fs)


def symplectic_companion(f, space):
    """A matrix in Sp_2n(F_l) whose characteristic polynomial is f."""
    l = space.ell
    if f.field != field_create(l):
        raise ValueError(f"polynomial must be over F_{l}")
    if f.degree != space.dim:
        raise ValueError(f"polynomial degree {f.degree} does not match dimension {space.dim}")
    if not is_symplectic(f):
        raise NotSymplectic(f"{f!r} is not symplectic")
    if not is_irreducible(f):
        raise NotIrreducible(f"{f!r} is not irreducible")
    C = companion_matrix(f)
    forms = _invariant_forms(C, l)
    A = next((A for A in forms if la.det(A, l)), None)
    if A is None:
        raise NoInvariantForm("no nondegenerate invariant alternating form")
    P = _symplectic_basis(A, space.n, l)
    M = la.mat_mul(la.mat_mul(la.inverse(P, l), C, l), P, l)
    g = GSpElement(space, M, 1)
    assert char_poly(g) == f
    return g


# -- orders ---------------------------------------------------------------

def sp_order(n, l):
    return l ** (n * n) * prod(l ** (2 * i) - 1 for i in range(1, n + 1))


def gsp_order(n, l):
    return (l - 1) * sp_order(n, l)


def admissible_prime(n, l):
    if not isprime(l):
        raise NotPrime(f"{l} is not prime")
    return l >= 5 and n % l != 0


# -- closure --------------------------------------------------------------

class Closure:
    """The finite subgroup generated by some GSp elements.

    Elements are held as an (N, d, d) array sorted lexicographically by their
    row-major entries.
    """

    def __init__(self, space, matrices):
        self.space = space
        self.matrices = matrices
        l, n = space.ell, space.n
        Mt = np.transpose(matrices, (0, 2, 1))
        J = np.array(space.J, dtype=np.int64)
        image = (Mt @ J @ matrices) % l
        self.multipliers = image[:, 0, n].copy()
        expected = (self.multipliers[:, None, None] * J[None]) % l
        if not np.array_equal(image, expected) or (self.multipliers == 0).any():
            raise AssertionError("closure left GSp")

    def __len__(self):
        return len(self.matrices)

    def element(self, i):
        return GSpElement(self.space, tuple(map(tuple, self.matrices[i].tolist())),
                          int(self.multipliers[i]))

    def __iter__(self):
        return (self.element(i) for i in range(len(self)))

    def __contains__(self, g):
        target = np.array(g.matrix, dtype=np.int64)
        return bool((self.matrices == target).all(axis=(1, 2)).any())

    @property
    def multiplier_one_count(self):
        return int((self.multipliers == 1).sum())

    def transvection_mask(self):
        l, d = self.space.ell, self.space.dim
        N = (self.matrices - np.eye(d, dtype=np.int64)) % l
        nonzero = N.any(axis=(1, 2))
        square_zero = ~((N @ N) % l).any(axis=(1, 2))
        # rank one <=> nonzero with every 2x2 minor vanishing
        minors = (N[:, :, None, :, None] * N[:, None, :, None, :]
                  - N[:, :, None, None, :] * N[:, None, :, :, None]) % l
        rank_le_1 = ~minors.reshape(len(N), -1).any(axis=1)
        return nonzero & square_zero & rank_le_1 & (self.multipliers == 1)

    def first_irreducible_nonzero_trace(self):
        """Index of the first element with nonzero trace and irreducible char poly."""
        l = self.space.ell
        traces = np.trace(self.matrices, axis1=1, axis2=2) % l
        seen = {}
        for i in np.flatnonzero(traces):
            f = char_poly_matrix(tuple(map(tuple, self.matrices[i].tolist())), l)
            if f.coeffs not in seen:
                seen[f.coeffs] = is_irreducible(f)
            if seen[f.coeffs]:
                return int(i)
        return None


def group_closure(gens, cap=None):
    """Breadth-first closure of ``gens`` under multiplication."""
    cap = closure_cap(cap)
    if not gens:
        raise ValueError("need at least one generator")
    space = gens[0].space
    if any(g.space != space for g in gens):
        raise ValueError("generators live in different spaces")
    l, d = space.ell, space.dim
    if l ** (d * d) >= 2 ** 62:
        raise Unsupported(f"closure keys overflow for l={l}, dim={d}")
    w = l ** np.arange(d * d - 1, -1, -1, dtype=np.int64)
    G = np.array([g.matrix for g in gens], dtype=np.int64)

    def keys_of(ms):
        return ms.reshape(len(ms), -1) @ w

    k0, idx = np.unique(keys_of(G), return_index=True)
    frontier = G[idx]
    seen = k0
    chunks = [frontier]
    if len(seen) > cap:
        raise CapExceeded("group closure", len(seen), cap)
    while len(frontier):
        prods = (frontier[:, None] @ G[None]) % l
        prods = prods.reshape(-1, d, d)
        keys, idx = np.unique(keys_of(prods), return_index=True)
        fresh = ~np.isin(keys, seen, assume_unique=True)
        frontier = prods[idx[fresh]]
        seen = np.union1d(seen, keys[fresh])
        chunks.append(frontier)
        if len(seen) > cap:
            raise CapExceeded("group closure", len(seen), cap)
    allm = np.concatenate(chunks)
    order = np.argsort(keys_of(allm), kind="stable")
    return Closure(space, allm[order])


# -- subspaces and the trichotomy -----------------------------------------

def is_nonsingular_subspace(space, W):
    l = space.ell
    W = [tuple(int(x) % l for x in w) for w in W]
    if la.rank(W, l) != len(W):
        raise NotIndependent("basis vectors are linearly dependent")
    return la.det(space.gram(W), l) != 0 if W else True


def _image_key(g, W):
    l = g.space.ell
    return la.subspace_key([g(w) for w in W], l)


def find_invariant_subspace(space, gens):
    """First nonsingular subspace of dimension 0 < 2k < 2n fixed by every generator."""
    for k in range(1, space.n):
        for W in la.subspaces(space.dim, 2 * k, space.ell):
            if not is_nonsingular_subspace(space, W):
                continue
            if all(_image_key(g, W) == W for g in gens):
                return [list(w) for w in W]
    return None


def find_degenerate_invariant_subspace(space, gens):
    """First proper nonzero subspace fixed by every generator on which the form
    is degenerate (isotropic lines, their orthogonal hyperplanes, ...)."""
    for k in range(1, space.dim):
        for W in la.subspaces(space.dim, k, space.ell):
            if k % 2 == 0 and is_nonsingular_subspace(space, W):
                continue
            if all(_image_key(g, W) == W for g in gens):
                return [list(w) for w in W]
    return None


def find_imprimitive_decomposition(space, gens):
    """A decomposition of V into h >= 2 equidimensional nonsingular subspaces
    permuted transitively by the generated group, or None.

    If such a system of blocks exists it is the orbit of any one block, so it
    suffices to take each nonsingular subspace S of a proper dimension
    dividing 2n and test whether its orbit is a direct-sum decomposition.
    """
    l, d = space.ell, space.dim
    for k in range(1, space.n):
        if d % (2 * k):
            continue
        h = d // (2 * k)
        for S in la.subspaces(d, 2 * k, l):
            if not is_nonsingular_subspace(space, S):
                continue
            orbit = [S]
            seen = {S}
            i = 0
            while i < len(orbit) and len(orbit) <= h:
                for g in gens:
                    T = _image_key(g, orbit[i])
                    if T not in seen:
                        seen.add(T)
                        orbit.append(T)
                i += 1
            if len(orbit) != h:
                continue
            if la.rank([v for B in orbit for v in B], l) != d:
                continue
            return [[list(v) for v in B] for B in sorted(orbit)]
    return None


REDUCIBLE, IMPRIMITIVE, CONTAINS_SP = "Reducible", "Imprimitive", "ContainsSp"


@dataclass(frozen=True)
class SubgroupClassification:
    tag: str
    witness: object
    order: int
    multiplier_one: int
    expected_sp_order: int

    def to_json(self):
        from .certificate import json_int

        return {"tag": self.tag, "witness": self.witness if self.tag != CONTAINS_SP
                else json_int(self.witness),
                "order": json_int(self.order), "multiplier_one": json_int(self.multiplier_one),
                "expected_sp_order": json_int(self.expected_sp_order)}


MAX_CLASSIFY_DIM = 4


def _check_gens(gens):
    if not gens:
        raise ValueError("need at least one generator")
    space = gens[0].space
    if any(g.space != space for g in gens):
        raise ValueError("generators live in different spaces")
    return space


def classify_subgroup(gens, cap=None, closure=None):
    """Sort the group generated by ``gens`` into exactly one of three cases.

    All three conditions are evaluated.  If none holds, the group still fixes
    some subspace on which the form is degenerate; that subspace is reported
    through OutsideTrichotomy.  Two or more holding at once is a bug.
    """
    space = _check_gens(gens)
    if space.dim > MAX_CLASSIFY_DIM:
        raise Unsupported(f"classification supports 2n <= {MAX_CLASSIFY_DIM}")
    if closure is None:
        closure = group_closure(gens, cap)
    if not closure.transvection_mask().any():
        raise NoTransvection("the generated group contains no transvection")
    invariant = find_invariant_subspace(space, gens)
    blocks = find_imprimitive_decomposition(space, gens)
    expected = sp_order(space.n, space.ell)
    count = closure.multiplier_one_count
    held = [(REDUCIBLE, invariant), (IMPRIMITIVE, blocks),
            (CONTAINS_SP, count if count == expected else None)]
    held = [(tag, w) for tag, w in held if w is not None]
    if not held:
        W = find_degenerate_invariant_subspace(space, gens)
        raise OutsideTrichotomy(
            f"group of order {len(closure)} with a transvection fits none of the three "
            f"cases; it fixes the degenerate subspace {W}", W)
    if len(held) != 1:
        raise AssertionError(f"expected exactly one case, found {[t for t, _ in held]}")
    tag, witness = held[0]
    return SubgroupClassification(tag, witness, len(closure), count, expected)


def validate_classification(result, gens, closure=None):
    """Re-check a classification witness with rank tests rather than RREF keys."""
    space = _check_gens(gens)
    l, d = space.ell, space.dim

    def maps_into(g, A, B):
        return la.rank([list(v) for v in B] + [list(g(v)) for v in A], l) == len(B)

    if result.tag == REDUCIBLE:
        W = [tuple(v) for v in result.witness]
        return (0 < len(W) < d and len(W) % 2 == 0
                and is_nonsingular_subspace(space, W)
                and all(maps_into(g, W, W) for g in gens))
    if result.tag == IMPRIMITIVE:
        blocks = [[tuple(v) for v in B] for B in result.witness]
        h = len(blocks)
        dims = {len(B) for B in blocks}
        if h < 2 or len(dims) != 1 or la.rank([v for B in blocks for v in B], l) != d:
            return False
        if not all(is_nonsingular_subspace(space, B) for B in blocks):
            return False
        perm = []
        for g in gens:
            images = []
            for B in blocks:
                hits = [j for j, C in enumerate(blocks) if maps_into(g, B, C)]
                if len(hits) != 1:
                    return False
                images.append(hits[0])
            perm.append(images)
        reach, stack = {0}, [0]
        while stack:
            i = stack.pop()
            for images in perm:
                if images[i] not in reach:
                    reach.add(images[i])
                    stack.append(images[i])
        return len(reach) == h
    if result.tag == CONTAINS_SP:
        if closure is None:
            closure = group_closure(gens)
        expected = sp_order(space.n, l)
        return closure.multiplier_one_count == expected == result.witness
    return False


def criterion_check(gens, cap=None, closure=None):
    """(contains a transvection, contains an irreducible element of nonzero trace)."""
    _check_gens(gens)
    if closure is None:
        closure = group_closure(gens, cap)
    has_t = bool(closure.transvection_mask().any())
    has_s = closure.first_irreducible_nonzero_trace() is not None
    return has_t, has_s
