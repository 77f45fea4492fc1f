"""Exact arithmetic in prime fields and their extensions.

A field F_{p^r} is presented as F_p[t]/(m(t)) for a monic irreducible
modulus m.  Elements are residues c_0 + c_1 t + ... + c_{r-1} t^{r-1}; the
code-level API packs that coefficient vector into the integer
``c_0 + c_1 p + ... + c_{r-1} p^(r-1)`` (the element's *code*), which is
also the canonical element order used throughout the package.

Subfields are handled by embedding: F_{p^k} sits inside F_{p^r} (k | r)
through a root of the canonical degree-k modulus, found once per pair.
"""

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product

from sympy import factorint, isprime

from . import _parith as pa
from .errors import (BadTower, DivisionByZero, FieldMismatch, FieldOverflow,
                     NotIrreducible, NotPrime, NotPrimePower)

MAX_ORDER = 2 ** 64
TABLE_LIMIT = 2 ** 16


def prime_power(q):
    """Return ``(p, r)`` with ``q == p**r``, or raise NotPrimePower."""
    if not isinstance(q, int) or q < 2:
        raise NotPrimePower(f"{q!r} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    (p, r), = f.items()
    return p, r


def _digits(code, p, r):
    out = []
    for _ in range(r):
        code, c = divmod(code, p)
        out.append(c)
    return out


def _undigits(coeffs, p):
    code = 0
    for c in reversed(coeffs):
        code = code * p + c
    return code


class _PrimeField:
    """Minimal F_p code API used while searching for a modulus."""

    def __init__(self, p):
        self.p = p
        self.order = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        return pow(a, -1, self.p)


def _search_modulus(p, r):
    # smallest monic irreducible, comparing coefficient vectors from a_0 upward
    Fp = _PrimeField(p)
    for low in product(range(p), repeat=r):
        if r > 1 and low[0] == 0:
            continue
        f = list(low) + [1]
        if pa.is_irreducible_codes(Fp, f):
            return tuple(f)
    raise AssertionError(f"no irreducible polynomial of degree {r} over F_{p}")


@dataclass(frozen=True)
class FiniteField:
    """The field F_{p^r} = F_p[t]/(modulus).

    ``modulus`` holds all r+1 coefficients, constant term first.  For r == 1
    it is ``(0, 1)`` by convention and never used.
    """

    p: int
    r: int
    modulus: tuple
    _exp: list = dc_field(default=None, compare=False, repr=False)
    _log: list = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        p, r = self.p, self.r
        if not isinstance(p, int) or p < 2 or not isprime(p):
            raise NotPrime(f"{p!r} is not prime")
        if not isinstance(r, int) or r < 1:
            raise ValueError(f"degree must be a positive integer, got {r!r}")
        if p ** r > MAX_ORDER:
            raise FieldOverflow(f"{p}^{r} exceeds the supported order 2^64")
        mod = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if r == 1:
            if mod != (0, 1):
                raise NotIrreducible("prime fields use the conventional modulus (0, 1)")
        else:
            if len(mod) != r + 1 or mod[-1] != 1 or any(not 0 <= c < p for c in mod):
                raise NotIrreducible(f"modulus {mod} is not monic of degree {r} over F_{p}")
            if not pa.is_irreducible_codes(_PrimeField(p), list(mod)):
                raise NotIrreducible(f"modulus {mod} is reducible over F_{p}")
            if p ** r <= TABLE_LIMIT:
                self._build_tables()

    # -- construction helpers -------------------------------------------

    @property
    def order(self):
        return self.p ** self.r

    def _slow_mul(self, a, b):
        p, r = self.p, self.r
        x, y = _digits(a, p, r), _digits(b, p, r)
        prod = [0] * (2 * r - 1)
        for i, c in enumerate(x):
            if c:
                for j, d in enumerate(y):
                    prod[i + j] += c * d
        mod = self.modulus
        for k in range(2 * r - 2, r - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(r):
                    prod[k - r + j] -= c * mod[j]
        return _undigits([c % p for c in prod[:r]], p)

    def _build_tables(self):
        q = self.order
        g = self._find_primitive(self._slow_mul)
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        log[0] = -1
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, g)
        exp[q - 1:] = exp[:q - 1]
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)

    def _find_primitive(self, mul):
        q = self.order
        primes = list(factorint(q - 1))
        for g in range(1, q):
            if all(self._pow_with(mul, g, (q - 1) // s) != 1 for s in primes):
                return g
        raise AssertionError("multiplicative group is not cyclic")

    @staticmethod
    def _pow_with(mul, a, e):
        result = 1
        while e:
            if e & 1:
                result = mul(result, a)
            e >>= 1
            if e:
                a = mul(a, a)
        return result

    # -- code-level arithmetic ------------------------------------------

    def add(self, a, b):
        p = self.p
        if self.r == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out, scale = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += (x + y) % p * scale
            scale *= p
        return out

    def neg(self, a):
        p = self.p
        if self.r == 1:
            return -a % p
        if p == 2:
            return a
        out, scale = 0, 1
        while a:
            a, x = divmod(a, p)
            out += -x % p * scale
            scale *= p
        return out

    def sub(self, a, b):
        if self.r == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.r == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.r == 1:
            return pow(a, -1, self.p)
        if self._log is not None:
            return self._exp[self.order - 1 - self._log[a]]
        return self.pow(a, self.order - 2)

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.r == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        if self._log is not None:
            return self._exp[self._log[a] * e % (self.order - 1)]
        return self._pow_with(self._slow_mul, a, e)

    def primitive_element(self):
        """Smallest code generating the multiplicative group."""
        if self._exp is not None:
            return self._exp[1] if self.order > 2 else 1
        return self._find_primitive(self.mul)

    # -- element-level interface ----------------------------------------

    def __call__(self, n):
        """The image of the integer ``n`` (i.e. ``n * 1``)."""
        if isinstance(n, FieldElement):
            if n.field != self:
                raise FieldMismatch("element belongs to a different field")
            return n
        return FieldElement(self, int(n) % self.p)

    def from_code(self, code):
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for F_{self.order}")
        return FieldElement(self, code)

    def from_coeffs(self, coeffs):
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.r:
            raise ValueError(f"too many coefficients for F_{self.p}^{self.r}")
        return FieldElement(self, _undigits(coeffs, self.p))

    def coeffs(self, code):
        return _digits(code, self.p, self.r)

    def gen(self):
        """The class of t, a root of the modulus."""
        return FieldElement(self, 0 if self.r == 1 else self.p)

    def zero(self):
        return FieldElement(self, 0)

    def one(self):
        return FieldElement(self, 1)

    def elements(self):
        """All elements in canonical (code) order."""
        return [FieldElement(self, k) for k in range(self.order)]

    def __repr__(self):
        if self.r == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.r}, modulus={list(self.modulus)})"

    @property
    def spec(self):
        return f"{self.p}^{self.r}"


@lru_cache(maxsize=None)
def field_create(p, r=1):
    """The field of order p^r with its canonical modulus."""
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise NotPrime(f"{p!r} is not prime")
    if not isinstance(r, int) or r < 1:
        raise ValueError(f"degree must be a positive integer, got {r!r}")
    if p ** r > MAX_ORDER:
        raise FieldOverflow(f"{p}^{r} exceeds the supported order 2^64")
    if r == 1:
        return FiniteField(p, 1, (0, 1))
    return FiniteField(p, r, _search_modulus(p, r))


def field_of_order(q):
    p, r = prime_power(q)
    return field_create(p, r)


def parse_field_spec(text):
    """Parse ``"p^r"`` (or a bare prime power ``"q"``) into a field."""
    text = text.strip()
    try:
        if "^" in text:
            p, r = (int(s) for s in text.split("^"))
            return field_create(p, r)
        return field_of_order(int(text))
    except ValueError as exc:
        if isinstance(exc, (NotPrime, NotPrimePower)):
            raise
        raise ValueError(f"bad field spec {text!r}") from exc


class FieldElement:
    """An immutable element of a FiniteField."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", code)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self):
        return self.field.coeffs(self.code)

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.code, self.field.inv(b)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def inv(self):
        return FieldElement(self.field, self.field.inv(self.code))

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.r, self.code))

    def __lt__(self, other):
        return self.code < self._other(other)

    def __repr__(self):
        if self.field.r == 1:
            return f"{self.code} (mod {self.field.p})"
        terms = [f"{c}*t^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return (" + ".join(terms) or "0") + f" in GF({self.field.p}^{self.field.r})"


def add(x, y):
    return x + y


def sub(x, y):
    return x - y


def mul(x, y):
    return x * y


def neg(x):
    return -x


def inv(x):
    return x.inv()


def power(x, e):
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    return x ** e


# -- towers ---------------------------------------------------------------

def subfield_degree(F, q):
    """k such that q == p^k and k | r; BadTower otherwise."""
    try:
        p, k = prime_power(q)
    except NotPrimePower:
        raise BadTower(f"{q} is not a prime power") from None
    if p != F.p or F.r % k:
        raise BadTower(f"F_{q} is not a subfield of F_{F.order}")
    return k


@dataclass(frozen=True)
class Embedding:
    """The inclusion of the canonical F_{p^k} into ``big``."""

    sub: FiniteField
    big: FiniteField
    root: int
    _powers: tuple = dc_field(compare=False, repr=False)
    _back: dict = dc_field(compare=False, repr=False)

    def image(self, a):
        if self.sub.r == 1:
            return a
        acc = 0
        big = self.big
        for c, g in zip(self.sub.coeffs(a), self._powers):
            if c:
                acc = big.add(acc, big.mul(c, g))
        return acc

    def preimage(self, b):
        if self.sub.r == 1:
            if b >= self.sub.p:
                raise BadTower("element does not lie in the prime field")
            return b
        try:
            return self._back[b]
        except KeyError:
            raise BadTower(f"element {b} does not lie in the subfield F_{self.sub.order}") from None


@lru_cache(maxsize=None)
def embedding(sub, big):
    """Embed ``sub`` into ``big`` through the smallest-code root of sub's modulus."""
    k = subfield_degree(big, sub.order)
    if sub.r == 1:
        return Embedding(sub, big, 0, (1,), {})
    if sub == big:
        powers = tuple(big.pow(big.p, i) for i in range(k))
        return Embedding(sub, big, big.p, powers, {a: a for a in range(big.order)})
    Q, q = big.order, sub.order
    zeta = big.pow(big.primitive_element(), (Q - 1) // (q - 1))
    roots = []
    y = 1
    for _ in range(q - 1):
        if pa.peval(big, list(sub.modulus), y) == 0:
            roots.append(y)
        y = big.mul(y, zeta)
    root = min(roots)
    powers = tuple(big.pow(root, i) for i in range(k))
    emb = Embedding(sub, big, root, powers, {})
    emb._back.update((emb.image(a), a) for a in range(q))
    return emb


def frobenius(x, q0):
    """x^{q0} for a subfield order q0 of x's field."""
    subfield_degree(x.field, q0)
    return x ** q0


def _conjugates(x, q):
    out = [x.code]
    F = x.field
    y = F.pow(x.code, q)
    while y != x.code:
        out.append(y)
        y = F.pow(y, q)
    return out


def relative_trace(x, q):
    """Sum of x^{q^i}, i < n, as an element of the canonical F_q."""
    F = x.field
    k = subfield_degree(F, q)
    n = F.r // k
    acc, y = 0, x.code
    for _ in range(n):
        acc = F.add(acc, y)
        y = F.pow(y, q)
    sub = field_create(F.p, k)
    return FieldElement(sub, embedding(sub, F).preimage(acc))


def minimal_polynomial(x, q):
    """Minimal polynomial of x over the canonical F_q, as a MonicPoly."""
    from .poly import MonicPoly

    F = x.field
    k = subfield_degree(F, q)
    sub = field_create(F.p, k)
    emb = embedding(sub, F)
    f = [1]
    for c in _conjugates(x, q):
        f = pa.pmul(F, f, [F.neg(c), 1])
    return MonicPoly(sub, [emb.preimage(c) for c in f[:-1]])


def element_degree(x, q):
    """Degree of F_q(x) over F_q."""
    subfield_degree(x.field, q)
    return len(_conjugates(x, q))
