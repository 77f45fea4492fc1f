"""Dense univariate polynomial arithmetic over a finite field.

Polynomials are lists of element codes, constant term first, with no
trailing zeros (the zero polynomial is ``[]``).  ``F`` is any object with
the code-level API of :class:`spforge.galois.FiniteField`
(``add``, ``sub``, ``neg``, ``mul``, ``inv``, ``order``).
"""

from sympy import factorint


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a):
    return len(a) - 1


def padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(out)


def psub(F, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(F.sub(x, y))
    return trim(out)


def pscale(F, a, c):
    if c == 0:
        return []
    return trim([F.mul(x, c) for x in a])


def pmul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = add(out[i + j], mul(x, y))
    return trim(out)


def pdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    lead_inv = F.inv(b[-1])
    q = [0] * (len(r) - db)
    sub, mul = F.sub, F.mul
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = mul(c, lead_inv)
        q[k - db] = c
        for j in range(db + 1):
            if b[j]:
                r[k - db + j] = sub(r[k - db + j], mul(c, b[j]))
    return trim(q), trim(r[:db] if db else [])


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def monic(F, a):
    if not a:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F, a, b):
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, pmod(F, a, b)
    return monic(F, a)


def pmulmod(F, a, b, m):
    return pmod(F, pmul(F, a, b), m)


def ppowmod(F, a, e, m):
    result = [1] if len(m) > 1 else []
    base = pmod(F, a, m)
    while e:
        if e & 1:
            result = pmulmod(F, result, base, m)
        e >>= 1
        if e:
            base = pmulmod(F, base, base, m)
    return result


def peval(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def is_irreducible_codes(F, f):
    """Deterministic Rabin test for a monic ``f``.

    ``f`` of degree d is irreducible iff ``x^(q^d) = x (mod f)`` and
    ``gcd(x^(q^(d/s)) - x, f) = 1`` for every prime ``s | d``.
    """
    d = deg(f)
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] == 0:
        return False
    q = F.order
    x = [0, 1]
    # frob[i] = x^(q^i) mod f
    frob = [pmod(F, x, f)]
    for _ in range(d):
        frob.append(ppowmod(F, frob[-1], q, f))
    if psub(F, frob[d], x):
        return False
    for s in factorint(d):
        h = psub(F, frob[d // s], x)
        if len(pgcd(F, f, h)) > 1:
            return False
    return True
