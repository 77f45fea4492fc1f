"""Monic polynomials over finite fields: trace, the symplectic shape,
irreducibility, counting formulas and the search for irreducible
symplectic polynomials of nonzero trace.
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from sympy import divisors, factorint

from . import _parith as pa
from .errors import BadHypothesis, CapExceeded, FieldMismatch, NotIrreducible
from .galois import (FieldElement, element_degree, field_create, field_of_order,
                     minimal_polynomial, prime_power, relative_trace)

DEFAULT_ENUM_CAP = 3 ** 10


def enumeration_cap(cap=None):
    if cap is not None:
        return cap
    return int(os.environ.get("FORGE_CAP", DEFAULT_ENUM_CAP))


class MonicPoly:
    """x^d + a_{d-1} x^{d-1} + ... + a_0 over ``field``.

    ``coeffs`` are a_0..a_{d-1} given as element codes or FieldElements; the
    leading 1 is implicit.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise FieldMismatch("coefficient from a different field")
                c = c.code
            if not 0 <= c < field.order:
                raise ValueError(f"coefficient code {c} out of range")
            cs.append(int(c))
        if not cs:
            raise ValueError("a monic polynomial needs degree >= 1")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("MonicPoly is immutable")

    @classmethod
    def from_full(cls, field, full):
        """Build from all coefficients (constant first) of a monic list."""
        full = pa.trim(list(full))
        if not full or full[-1] != 1:
            raise ValueError("polynomial is not monic")
        return cls(field, full[:-1])

    @property
    def degree(self):
        return len(self.coeffs)

    @property
    def full(self):
        return list(self.coeffs) + [1]

    def __call__(self, x):
        F = self.field
        if isinstance(x, FieldElement):
            if x.field != F:
                raise FieldMismatch("evaluation point from a different field")
            x = x.code
        return FieldElement(F, pa.peval(F, self.full, x))

    def __mul__(self, other):
        if other.field != self.field:
            raise FieldMismatch("polynomials over different fields")
        return MonicPoly.from_full(self.field, pa.pmul(self.field, self.full, other.full))

    def __eq__(self, other):
        if not isinstance(other, MonicPoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, self.field.r, self.coeffs))

    def sort_key(self):
        q = self.field.order
        return (self.degree, sum(c * q ** i for i, c in enumerate(self.coeffs)))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        F = self.field
        terms = []
        for i, c in reversed(list(enumerate(self.full))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if F.r == 1:
                coef = str(c)
            else:
                coef = "(" + "+".join(f"{d}t^{j}" if j else str(d)
                                      for j, d in enumerate(F.coeffs(c)) if d) + ")"
            if not mono:
                terms.append(coef)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{coef}*{mono}")
        return " + ".join(terms) + f" over GF({F.order})"


def poly_from_ints(q, coeffs):
    """Shorthand: MonicPoly over the canonical F_q from a_0..a_{d-1} codes."""
    return MonicPoly(field_of_order(q), coeffs)


def poly_trace(f):
    """The coefficient a_{d-1}."""
    return FieldElement(f.field, f.coeffs[-1])


def reciprocal_identity_holds(f):
    """Whether x^d f(1/x) == f(x), computed as a Laurent substitution.

    Substituting 1/x sends a_i x^i to a_i x^{-i}; multiplying by x^d puts the
    term at exponent d - i.
    """
    full = f.full
    d = f.degree
    rev = [0] * (d + 1)
    for i, c in enumerate(full):
        rev[d - i] = c
    return pa.trim(rev) == full


def is_symplectic(f):
    d = f.degree
    a = f.full
    result = d % 2 == 0 and a[0] == 1 and all(a[i] == a[d - i] for i in range(1, d // 2 + 1))
    if d % 2 == 0:
        assert result == reciprocal_identity_holds(f), "symplectic predicates disagree"
    return result


def is_irreducible(f):
    return pa.is_irreducible_codes(f.field, f.full)


def mobius(d):
    if d < 1:
        raise ValueError("mobius is defined on positive integers")
    exps = factorint(d)
    if any(e > 1 for e in exps.values()):
        return 0
    return -1 if len(exps) % 2 else 1


def _necklace_sum(q, n):
    return sum(mobius(d) * q ** (n // d) for d in divisors(n))


def count_irreducible(q, n):
    prime_power(q)
    s = _necklace_sum(q, n)
    assert s % n == 0
    return s // n


def _check_p_nmid_n(q, n):
    p, _ = prime_power(q)
    if n % p == 0:
        raise BadHypothesis(f"p = {p} divides n = {n}")
    return p


def count_irreducible_nonzero_trace(q, n):
    _check_p_nmid_n(q, n)
    num = (q - 1) * _necklace_sum(q, n)
    assert num % (q * n) == 0, "nonzero-trace count is not an integer"
    return num // (q * n)


def count_reducible_alpha(q, n):
    prime_power(q)
    Q = q ** n
    return (Q + 1) // 2 if q % 2 else Q // 2


def lower_bound_M(q, n):
    _check_p_nmid_n(q, n)
    return Fraction(q - 1, q) * _necklace_sum(q, n) - Fraction(q ** n + 1, 2)


# -- enumeration oracle ---------------------------------------------------

TRACE_FILTERS = ("all", "nonzero", "zero")


def _monic_from_index(idx, q, d):
    out = []
    for _ in range(d):
        idx, c = divmod(idx, q)
        out.append(c)
    out.append(1)
    return out


def _index(full, q):
    idx = 0
    for c in reversed(full[:-1]):
        idx = idx * q + c
    return idx


def _irreducible_full(F, n, memo):
    """All monic irreducibles of degree n as full lists, by sieving products."""
    if n in memo:
        return memo[n]
    q = F.order
    if n == 1:
        out = [[c, 1] for c in range(q)]
    else:
        reducible = bytearray(q ** n)
        for k in range(1, n // 2 + 1):
            for f in _irreducible_full(F, k, memo):
                for j in range(q ** (n - k)):
                    reducible[_index(pa.pmul(F, f, _monic_from_index(j, q, n - k)), q)] = 1
        out = [_monic_from_index(i, q, n) for i in range(q ** n) if not reducible[i]]
    memo[n] = out
    return out


def enumerate_irreducible(q, n, trace_filter="all", cap=None):
    """Every monic irreducible of degree n over F_q, in canonical order.

    Exhaustive: all q^n monic candidates are sieved against products of
    lower-degree factors, so the result never depends on is_irreducible.
    """
    if trace_filter not in TRACE_FILTERS:
        raise ValueError(f"trace_filter must be one of {TRACE_FILTERS}")
    cap = enumeration_cap(cap)
    if q ** n > cap:
        raise CapExceeded(f"enumeration over F_{q}, degree {n}", q ** n, cap)
    F = field_of_order(q)
    polys = [MonicPoly.from_full(F, f) for f in _irreducible_full(F, n, {})]
    if trace_filter == "nonzero":
        polys = [f for f in polys if f.coeffs[-1] != 0]
    elif trace_filter == "zero":
        polys = [f for f in polys if f.coeffs[-1] == 0]
    return polys


# -- the symplectic lift and the search -----------------------------------

def lift_expand(f):
    """x^n f(x + 1/x) as a MonicPoly of degree 2n (no irreducibility check).

    x^n (x + 1/x)^i = x^(n-i) (x^2 + 1)^i, so the sum is polynomial.
    """
    F = f.field
    n = f.degree
    g = []
    power = [1]  # (x^2 + 1)^i
    for i, a in enumerate(f.full):
        if a:
            term = [0] * (n - i) + pa.pscale(F, power, a)
            g = pa.padd(F, g, term)
        power = pa.pmul(F, power, [1, 0, 1])
    return MonicPoly.from_full(F, g)


def symplectic_lift(f):
    """Return ``(g, lift_irreducible)`` with g = x^n f(x + 1/x)."""
    if not is_irreducible(f):
        raise NotIrreducible(f"{f!r} is not irreducible")
    g = lift_expand(f)
    return g, is_irreducible(g)


@dataclass(frozen=True)
class SearchHit:
    alpha: FieldElement
    base: MonicPoly
    poly: MonicPoly


def admissible_alpha(alpha, q, n):
    """alpha generates F_{q^n}, has nonzero trace to F_q, and x^2 - alpha x + 1
    is irreducible over F_{q^n}."""
    if element_degree(alpha, q) != n:
        return False
    if relative_trace(alpha, q).code == 0:
        return False
    big = alpha.field
    quad = MonicPoly(big, [1, big.neg(alpha.code)])
    return is_irreducible(quad)


def search_symplectic_irreducible(q, two_n):
    """First admissible alpha in canonical order and its lifted polynomial.

    No hypothesis checks: returns None when no admissible alpha exists.
    """
    if two_n % 2 or two_n < 2:
        raise ValueError("target degree must be a positive even integer")
    n = two_n // 2
    p, r = prime_power(q)
    big = field_create(p, r * n)
    for code in range(big.order):
        alpha = big.from_code(code)
        if not admissible_alpha(alpha, q, n):
            continue
        f = minimal_polynomial(alpha, q)
        g, ok = symplectic_lift(f)
        assert ok, "lift of an admissible alpha must be irreducible"
        return SearchHit(alpha, f, g)
    return None


def find_symplectic_irreducible(q, two_n):
    """An irreducible symplectic polynomial of degree two_n and nonzero trace over F_q."""
    if two_n % 2 or two_n < 2:
        raise ValueError("target degree must be a positive even integer")
    if q < 5:
        raise BadHypothesis(f"q = {q} < 5")
    _check_p_nmid_n(q, two_n // 2)
    hit = search_symplectic_irreducible(q, two_n)
    if hit is None:
        raise AssertionError(f"no admissible alpha for q={q}, 2n={two_n}")
    return hit.poly


# -- verification harness -------------------------------------------------

KINDS = ("irreducible", "nonzero-trace", "reducible-alpha", "bound-M")


@dataclass(frozen=True)
class CountReport:
    """One formula value against its exhaustive counterpart.

    For ``bound-M`` the relation is an inequality (enumeration >= formula);
    every other kind requires equality.
    """

    kind: str
    q: int
    n: int
    formula: Union[int, Fraction]
    enumeration: Optional[int] = None

    @property
    def relation(self):
        return "ge" if self.kind == "bound-M" else "eq"

    @property
    def agree(self):
        if self.enumeration is None:
            return None
        if self.relation == "ge":
            return self.enumeration >= self.formula and self.formula > 0
        return self.enumeration == self.formula

    def to_json(self):
        from .certificate import json_int

        formula = self.formula
        if isinstance(formula, Fraction):
            formula = str(formula)
        else:
            formula = json_int(formula)
        out = {"kind": self.kind, "q": self.q, "n": self.n, "formula": formula,
               "relation": self.relation}
        if self.enumeration is not None:
            out["enumeration"] = json_int(self.enumeration)
            out["agree"] = self.agree
        return out


def count_formula(kind, q, n):
    if kind == "irreducible":
        return count_irreducible(q, n)
    if kind == "nonzero-trace":
        return count_irreducible_nonzero_trace(q, n)
    if kind == "reducible-alpha":
        return count_reducible_alpha(q, n)
    if kind == "bound-M":
        return lower_bound_M(q, n)
    raise ValueError(f"unknown count kind {kind!r}")


def count_exhaustive(kind, q, n, cap=None):
    cap = enumeration_cap(cap)
    if q ** n > cap:
        raise CapExceeded(f"{kind} scan over q={q}, n={n}", q ** n, cap)
    from . import kernel

    if kind == "irreducible":
        return len(enumerate_irreducible(q, n, "all", cap))
    if kind == "nonzero-trace":
        _check_p_nmid_n(q, n)
        return len(enumerate_irreducible(q, n, "nonzero", cap))
    if kind == "reducible-alpha":
        return kernel.count_reducible_alpha_scan(q, n)
    if kind == "bound-M":
        _check_p_nmid_n(q, n)
        return kernel.count_valid_alpha(q, n)
    raise ValueError(f"unknown count kind {kind!r}")


def count_report(kind, q, n, verify=False, cap=None):
    formula = count_formula(kind, q, n)
    enum = count_exhaustive(kind, q, n, cap) if verify else None
    return CountReport(kind, q, n, formula, enum)


def prime_powers_upto(bound):
    out = []
    for q in range(2, bound + 1):
        if len(factorint(q)) == 1:
            out.append(q)
    return out


def verify_counts(q_max, n_max, cap=None, skip_over_cap=False):
    """Formula-vs-enumeration reports for every prime power q <= q_max, n <= n_max.

    Returns ``(reports, skipped)`` where ``skipped`` lists the (q, n) cells
    beyond the cap; with ``skip_over_cap=False`` such a cell raises instead.
    """
    cap = enumeration_cap(cap)
    reports, skipped = [], []
    for q in prime_powers_upto(q_max):
        p, _ = prime_power(q)
        for n in range(1, n_max + 1):
            if q ** n > cap:
                if not skip_over_cap:
                    raise CapExceeded(f"cell q={q}, n={n}", q ** n, cap)
                skipped.append((q, n))
                continue
            kinds = ["irreducible", "reducible-alpha"]
            if n % p:
                kinds.insert(1, "nonzero-trace")
                if q >= 5:
                    kinds.append("bound-M")
            for kind in kinds:
                reports.append(count_report(kind, q, n, verify=True, cap=cap))
    return reports, skipped
