"""Small dense linear algebra over a prime field F_l.

Matrices are tuples of row tuples of ints in [0, l).
"""

from itertools import combinations, product


def as_matrix(rows, l):
    return tuple(tuple(int(x) % l for x in row) for row in rows)


def identity(d):
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def transpose(A):
    return tuple(zip(*A))


def mat_mul(A, B, l):
    Bt = tuple(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) % l for col in Bt) for row in A)


def mat_vec(A, v, l):
    return tuple(sum(a * x for a, x in zip(row, v)) % l for row in A)


def mat_sub(A, B, l):
    return tuple(tuple((a - b) % l for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def scale(A, c, l):
    return tuple(tuple(a * c % l for a in row) for row in A)


def is_zero(A):
    return all(x == 0 for row in A for x in row)


def rref(rows, l):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    pivots = []
    if not M:
        return (), ()
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] % l), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, l)
        M[r] = [x * inv % l for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % l for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r]), tuple(pivots)


def rank(rows, l):
    return len(rref(rows, l)[0])


def det(A, l):
    M = [list(r) for r in A]
    d = len(M)
    out = 1
    for c in range(d):
        piv = next((i for i in range(c, d) if M[i][c] % l), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            out = -out
        out = out * M[c][c] % l
        inv = pow(M[c][c], -1, l)
        for i in range(c + 1, d):
            if M[i][c]:
                f = M[i][c] * inv % l
                M[i] = [(x - f * y) % l for x, y in zip(M[i], M[c])]
    return out % l


def inverse(A, l):
    d = len(A)
    aug = [list(row) + list(e) for row, e in zip(A, identity(d))]
    R, piv = rref(aug, l)
    if tuple(piv[:d]) != tuple(range(d)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[d:]) for row in R)


def nullspace(A, l):
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    ncols = len(A[0])
    R, piv = rref(A, l)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, piv):
            v[pc] = -row[f] % l
        basis.append(tuple(v))
    return basis


def subspace_key(vectors, l):
    """Canonical form (RREF basis) of the span of ``vectors``."""
    return rref(vectors, l)[0]


def subspaces(d, k, l):
    """All k-dimensional subspaces of F_l^d as RREF bases, deterministic order."""
    for piv in combinations(range(d), k):
        slots = [(i, j) for i, pc in enumerate(piv) for j in range(pc + 1, d) if j not in piv]
        for vals in product(range(l), repeat=len(slots)):
            rows = [[0] * d for _ in range(k)]
            for i, pc in enumerate(piv):
                rows[i][pc] = 1
            for (i, j), v in zip(slots, vals):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)
