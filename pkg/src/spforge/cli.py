"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 bad hypothesis,
3 cap exceeded, 4 parse error.
"""

import argparse
import json
import sys

from . import certificate as cert_mod
from . import gsp
from .errors import (BadHypothesis, CapExceeded, ForgeError, NotGSp,
                     NotPrimePower, NoTransvection, OutsideTrichotomy, ParseError)
from .poly import (KINDS, count_report, enumeration_cap, prime_power,
                   search_symplectic_irreducible, verify_counts)

EXIT_OK, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_CAP, EXIT_PARSE = 0, 1, 2, 3, 4


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def parse_generators(text, space):
    """One matrix per line, 4n^2 integers row-major; '#' starts a comment."""
    gens = []
    d = space.dim
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vals = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer entry") from None
        if len(vals) != d * d:
            raise ParseError(f"line {lineno}: expected {d * d} entries, got {len(vals)}")
        try:
            gens.append(gsp.GSpElement.of([vals[i * d:(i + 1) * d] for i in range(d)], space))
        except NotGSp as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    if not gens:
        raise ParseError("no generators found")
    return gens


def cmd_count(args):
    rep = count_report(args.which, args.q, args.n, verify=args.verify, cap=args.cap)
    print(json.dumps(rep.to_json(), sort_keys=True))
    if args.verify and not rep.agree:
        return EXIT_FAIL
    return EXIT_OK


def cmd_search(args):
    cert = cert_mod.search_certificate(args.q, args.deg, deterministic=args.deterministic)
    _emit(cert_mod.dumps(cert), args.out)
    return EXIT_OK


def cmd_witness(args):
    cert = cert_mod.witness_certificate(args.ell, args.n, cap=args.cap,
                                        deterministic=args.deterministic)
    _emit(cert_mod.dumps(cert), args.out)
    return EXIT_OK


def cmd_classify(args):
    space = gsp.SympSpace(args.ell, args.n)
    try:
        with open(args.gens) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc)) from None
    gens = parse_generators(text, space)
    cert = cert_mod.classify_certificate(gens, cap=args.cap, deterministic=args.deterministic)
    _emit(cert_mod.dumps(cert), args.out)
    return EXIT_OK


def closure_cells(q_max, n_max):
    """(n, l) cells for the closure suite: 3 <= l <= q_max prime, 2n <= 4, and
    Sp_2n(F_l) small enough for the default closure cap."""
    from sympy import primerange

    cells = []
    for ell in primerange(3, q_max + 1):
        for n in range(1, min(n_max, gsp.MAX_CLASSIFY_DIM // 2) + 1):
            if gsp.sp_order(n, ell) <= gsp.DEFAULT_CLOSURE_CAP:
                cells.append((n, ell))
    return cells


def closure_check(n, ell, cap=None):
    """Closure of {symplectic companion, transvection} contains Sp_2n exactly."""
    space = gsp.SympSpace(ell, n)
    hit = search_symplectic_irreducible(ell, 2 * n)
    if hit is None:
        return None
    s = gsp.symplectic_companion(hit.poly, space)
    t = gsp.make_transvection(space, space.basis_vector(0))
    closure = gsp.group_closure([s, t], cap)
    crit = gsp.criterion_check([s, t], closure=closure)
    tag = gsp.classify_subgroup([s, t], closure=closure).tag
    return (crit == (True, True) and tag == gsp.CONTAINS_SP
            and closure.multiplier_one_count == gsp.sp_order(n, ell))


def cmd_verify_all(args):
    cap = args.cap
    checks = []
    reports, skipped = verify_counts(args.qmax, args.nmax, cap=cap, skip_over_cap=True)
    for rep in reports:
        checks.append({"check": f"{rep.kind}(q={rep.q},n={rep.n})",
                       "status": "pass" if rep.agree else "fail",
                       "formula": str(rep.formula), "enumeration": rep.enumeration})
    for q, n in skipped:
        checks.append({"check": f"counts(q={q},n={n})", "status": "cap-exceeded"})
    for n, ell in closure_cells(args.qmax, args.nmax):
        name = f"closure(2n={2 * n},l={ell})"
        try:
            ok = closure_check(n, ell, cap)
        except CapExceeded:
            checks.append({"check": name, "status": "cap-exceeded"})
            continue
        if ok is not None:
            checks.append({"check": name, "status": "pass" if ok else "fail"})
    statuses = {c["status"] for c in checks}
    summary = {"checks": checks,
               "passed": sum(c["status"] == "pass" for c in checks),
               "failed": sum(c["status"] == "fail" for c in checks),
               "cap_exceeded": sum(c["status"] == "cap-exceeded" for c in checks)}
    print(json.dumps(summary, indent=2, sort_keys=True))
    if "fail" in statuses:
        return EXIT_FAIL
    if "cap-exceeded" in statuses:
        return EXIT_CAP
    return EXIT_OK


def cmd_recheck(args):
    try:
        with open(args.certificate) as fh:
            cert = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from None
    results = cert_mod.recheck(cert)
    for name, ok in results:
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(prog="forge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, certificate=True):
        p.add_argument("--cap", type=int, default=None,
                       help="closure/enumeration cap (default: $FORGE_CAP or built-in)")
        if certificate:
            p.add_argument("--deterministic", action="store_true", help="omit the timestamp")
            p.add_argument("--out", help="write the certificate here instead of stdout")

    p = sub.add_parser("count", help="counting formulas, optionally against enumeration")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", choices=KINDS, default="irreducible")
    p.add_argument("--verify", action="store_true")
    common(p, certificate=False)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("search", help="irreducible symplectic polynomial of nonzero trace")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--deg", type=int, required=True, help="target degree 2n")
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("witness", help="matrix witness and transvection in Sp_2n(F_l)")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("classify", help="classify the group generated by a generator file")
    p.add_argument("--gens", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-all", help="run every formula and closure check")
    p.add_argument("--qmax", type=int, default=9)
    p.add_argument("--nmax", type=int, default=4)
    common(p, certificate=False)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("recheck", help="re-validate a certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_recheck)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "q", None) is not None:
        try:
            prime_power(args.q)
        except NotPrimePower as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
    if getattr(args, "cap", None) is None and args.command in ("count", "verify-all"):
        args.cap = enumeration_cap()
    try:
        return args.func(args)
    except (BadHypothesis, NoTransvection) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OutsideTrichotomy as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
