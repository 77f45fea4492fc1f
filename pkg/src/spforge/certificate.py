"""JSON certificates and their independent re-validation."""

import json
from datetime import datetime, timezone

from . import gsp
from .galois import FiniteField, field_create, prime_power
from .poly import (CountReport, MonicPoly, count_exhaustive, count_formula,
                   find_symplectic_irreducible, is_irreducible, is_symplectic,
                   poly_trace, search_symplectic_irreducible)

SCHEMA_VERSION = 1
SAFE_INT = 2 ** 53


def json_int(x):
    """Integers beyond 2^53 travel as decimal strings."""
    x = int(x)
    return str(x) if abs(x) > SAFE_INT else x


def read_int(x):
    return int(x)


def dumps(cert):
    return json.dumps(cert, indent=2, sort_keys=True) + "\n"


def stamp(cert, deterministic):
    if not deterministic:
        cert["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return cert


# -- serialization of algebraic objects -----------------------------------

def field_json(F):
    return {"p": F.p, "r": F.r, "modulus": list(F.modulus), "order": json_int(F.order)}


def field_from_json(obj):
    return FiniteField(obj["p"], obj["r"], tuple(obj["modulus"]))


def element_json(F, code):
    return code if F.r == 1 else F.coeffs(code)


def element_from_json(F, obj):
    if isinstance(obj, list):
        return F.from_coeffs(obj).code
    return int(obj) % F.p


def poly_json(f):
    return [element_json(f.field, c) for c in f.coeffs]


def poly_from_json(F, coeffs):
    return MonicPoly(F, [element_from_json(F, c) for c in coeffs])


def element_matrix_json(g):
    return {"rows": g.flat, "multiplier": g.multiplier}


def element_from_json_matrix(space, obj):
    d = space.dim
    flat = obj["rows"]
    M = [flat[i * d:(i + 1) * d] for i in range(d)]
    g = gsp.GSpElement.of(M, space)
    if g.multiplier != obj["multiplier"]:
        raise ValueError("recorded multiplier does not match the matrix")
    return g


def polynomial_block(f):
    tr = poly_trace(f)
    return {"coefficients": poly_json(f), "degree": f.degree,
            "trace": element_json(f.field, tr.code),
            "checks": {"symplectic": is_symplectic(f), "irreducible": is_irreducible(f),
                       "nonzero_trace": bool(tr)}}


def closure_block(closure, expected, cap):
    if closure is None:
        return {"status": "unverified", "expected_sp_order": json_int(expected),
                "cap": json_int(cap)}
    return {"status": "verified", "size": json_int(len(closure)),
            "multiplier_one": json_int(closure.multiplier_one_count),
            "expected_sp_order": json_int(expected)}


# -- builders -------------------------------------------------------------

def search_certificate(q, two_n, deterministic=False):
    n = two_n // 2
    g = find_symplectic_irreducible(q, two_n)
    hit = search_symplectic_irreducible(q, two_n)
    big = hit.alpha.field
    cert = {
        "schema_version": SCHEMA_VERSION,
        "command": "search",
        "field": field_json(g.field),
        "parameters": {"q": json_int(q), "two_n": two_n, "n": n},
        "polynomial": polynomial_block(g),
        "alpha": {"field": field_json(big), "element": element_json(big, hit.alpha.code),
                  "base_polynomial": poly_json(hit.base)},
        "count_reports": [CountReport(k, q, n, count_formula(k, q, n)).to_json()
                          for k in ("nonzero-trace", "reducible-alpha", "bound-M")],
    }
    return stamp(cert, deterministic)


def witness_certificate(ell, n, cap=None, deterministic=False):
    from .errors import BadHypothesis

    if not gsp.admissible_prime(n, ell):
        raise BadHypothesis(f"l = {ell} is not admissible for n = {n}")
    cap = gsp.closure_cap(cap)
    space = gsp.SympSpace(ell, n)
    f = find_symplectic_irreducible(ell, 2 * n)
    s = gsp.symplectic_companion(f, space)
    v = space.basis_vector(0)
    t = gsp.make_transvection(space, v, 1)
    expected = gsp.sp_order(n, ell)
    closure = criterion = classification = None
    if expected <= cap and space.dim <= gsp.MAX_CLASSIFY_DIM:
        closure = gsp.group_closure([s, t], cap)
        has_t, has_s = gsp.criterion_check([s, t], closure=closure)
        criterion = {"has_transvection": has_t, "has_irreducible_nonzero_trace": has_s}
        classification = gsp.classify_subgroup([s, t], closure=closure).to_json()
    cert = {
        "schema_version": SCHEMA_VERSION,
        "command": "witness",
        "field": field_json(f.field),
        "parameters": {"n": n, "ell": ell},
        "polynomial": polynomial_block(f),
        "witness_matrix": element_matrix_json(s),
        "transvection": dict(element_matrix_json(t), vector=list(v), scalar=1),
        "closure": closure_block(closure, expected, cap),
        "criterion": criterion,
        "classification": classification,
        "count_reports": [CountReport(k, ell, n, count_formula(k, ell, n)).to_json()
                          for k in ("nonzero-trace", "bound-M")],
    }
    return stamp(cert, deterministic)


def classify_certificate(gens, cap=None, deterministic=False):
    space = gens[0].space
    closure = gsp.group_closure(gens, cap)
    result = gsp.classify_subgroup(gens, closure=closure)
    cert = {
        "schema_version": SCHEMA_VERSION,
        "command": "classify",
        "field": field_json(field_create(space.ell)),
        "parameters": {"n": space.n, "ell": space.ell},
        "generators": [element_matrix_json(g) for g in gens],
        "closure": closure_block(closure, gsp.sp_order(space.n, space.ell), cap),
        "classification": result.to_json(),
    }
    return stamp(cert, deterministic)


# -- recheck --------------------------------------------------------------

def _classification_from_json(obj):
    witness = obj["witness"]
    if obj["tag"] == gsp.CONTAINS_SP:
        witness = read_int(witness)
    return gsp.SubgroupClassification(obj["tag"], witness, read_int(obj["order"]),
                                      read_int(obj["multiplier_one"]),
                                      read_int(obj["expected_sp_order"]))


def recheck(cert):
    """Re-run every check named in a certificate from its own data.

    Returns a list of ``(name, passed)`` pairs.
    """
    results = []

    def check(name, fn):
        try:
            ok = bool(fn())
        except Exception as exc:  # a crash is a failed check, not a crash of recheck
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        results.append((name, ok))
        return ok

    check("schema_version", lambda: cert.get("schema_version") == SCHEMA_VERSION)
    F = field_from_json(cert["field"])
    params = cert["parameters"]
    command = cert.get("command")

    if "polynomial" in cert:
        pb = cert["polynomial"]
        f = poly_from_json(F, pb["coefficients"])
        check("polynomial.symplectic", lambda: is_symplectic(f) == pb["checks"]["symplectic"] is True)
        check("polynomial.irreducible", lambda: is_irreducible(f) == pb["checks"]["irreducible"] is True)
        check("polynomial.nonzero_trace",
              lambda: bool(poly_trace(f)) and pb["checks"]["nonzero_trace"] is True
              and element_from_json(F, pb["trace"]) == poly_trace(f).code)
        check("polynomial.degree", lambda: f.degree == pb["degree"])

    if command == "search":
        q, two_n = read_int(params["q"]), params["two_n"]
        check("search.field", lambda: F == field_create(*prime_power(q)))
        check("search.canonical_first_hit", lambda: find_symplectic_irreducible(q, two_n) == f)
        ab = cert["alpha"]
        big = field_from_json(ab["field"])
        check("search.alpha_lifts", lambda: _alpha_lifts(big, ab, q, two_n // 2, f))

    gens = None
    if command == "witness":
        space = gsp.SympSpace(params["ell"], params["n"])
        s = element_from_json_matrix(space, cert["witness_matrix"])
        tb = cert["transvection"]
        t = element_from_json_matrix(space, tb)
        check("witness.admissible", lambda: gsp.admissible_prime(space.n, space.ell))
        check("witness.multiplier_one", lambda: s.multiplier == 1)
        check("witness.char_poly", lambda: gsp.char_poly(s) == f)
        check("witness.nonzero_matrix_trace", lambda: s.trace != 0)
        check("transvection.is_transvection", lambda: gsp.is_transvection(t))
        check("transvection.matches_vector",
              lambda: gsp.make_transvection(space, tb["vector"], tb["scalar"]) == t)
        gens = [s, t]
    elif command == "classify":
        space = gsp.SympSpace(params["ell"], params["n"])
        gens = [element_from_json_matrix(space, g) for g in cert["generators"]]

    if gens is not None:
        cb = cert["closure"]
        check("closure.expected_sp_order",
              lambda: read_int(cb["expected_sp_order"]) == gsp.sp_order(space.n, space.ell))
        if cb["status"] == "verified":
            closure = gsp.group_closure(gens, max(gsp.closure_cap(), read_int(cb["size"])))
            check("closure.size", lambda: len(closure) == read_int(cb["size"]))
            check("closure.multiplier_one",
                  lambda: closure.multiplier_one_count == read_int(cb["multiplier_one"]))
            if cert.get("criterion") is not None:
                crit = cert["criterion"]
                check("criterion", lambda: gsp.criterion_check(gens, closure=closure)
                      == (crit["has_transvection"], crit["has_irreducible_nonzero_trace"]))
            if cert.get("classification") is not None:
                cls = _classification_from_json(cert["classification"])
                check("classification.witness",
                      lambda: gsp.validate_classification(cls, gens, closure=closure))
                check("classification.tag",
                      lambda: gsp.classify_subgroup(gens, closure=closure).tag == cls.tag)
                if command == "witness":
                    check("classification.contains_sp", lambda: cls.tag == gsp.CONTAINS_SP)

    for rep in cert.get("count_reports", []):
        check(f"count.{rep['kind']}({rep['q']},{rep['n']})", lambda rep=rep: _recheck_report(rep))
    return results


def _alpha_lifts(big, ab, q, n, f):
    from .galois import minimal_polynomial
    from .poly import admissible_alpha, lift_expand

    alpha = big.from_code(element_from_json(big, ab["element"]))
    base = minimal_polynomial(alpha, q)
    return (admissible_alpha(alpha, q, n) and poly_json(base) == ab["base_polynomial"]
            and lift_expand(base) == f)


def _recheck_report(rep):
    kind, q, n = rep["kind"], read_int(rep["q"]), rep["n"]
    formula = count_formula(kind, q, n)
    if str(formula) != str(rep["formula"]):
        return False
    if "enumeration" in rep:
        enum = count_exhaustive(kind, q, n)
        return enum == read_int(rep["enumeration"]) and CountReport(kind, q, n, formula, enum).agree
    return True
