"""Command-line front end.

Exit status: 0 on success or a passing verdict, 1 on a failing verdict,
2 on usage, parse, schema or precondition errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from itertools import permutations
from math import factorial

from . import analysis, concrete, corollaries, equation, expansion, scan, schema
from .errors import FunctionalEquationError, ParseError
from .parsing import parse_equation, parse_rational_function, render_equation

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_text(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _spec(args, required=True):
    if getattr(args, "equation", None):
        return parse_equation(args.equation)
    if getattr(args, "eq", None):
        return parse_equation(_read_text(args.eq))
    if required:
        raise UsageError("an equation is required (--eq PATH or --equation TEXT)")
    return None


def _ansatz(args):
    if not args.ansatz:
        raise UsageError("--ansatz is required")
    return schema.ansatz_from_json(schema.load_json(args.ansatz))


def _seed(args):
    if args.seed is None:
        raise UsageError("--seed is required for sampling commands")
    return args.seed


def _terms(spec):
    return [{"p": t.p, "q": t.q, "f": t.f_ref, "g": t.g_ref, "scalar": str(t.scalar)}
            for t in spec.terms]


# --------------------------------------------------------------------------
# commands; each returns (exit code, payload)

def cmd_check(args):
    spec = _spec(args)
    rep = equation.check_conditions(spec)
    out = {"equation": render_equation(spec), "terms": _terms(spec),
           "homogeneous": spec.is_homogeneous(), "conditions": rep.to_dict(),
           "verdict": "pass" if rep.ok else "fail"}
    return (EXIT_OK if rep.ok else EXIT_FAIL), out


def cmd_homogenize(args):
    spec = _spec(args)
    groups = equation.homogenize(spec)
    return EXIT_OK, {"equation": render_equation(spec), "groups": [
        {"N": g.N, "terms": [[t.p, t.q] for t in g.terms], "equation": render_equation(g)}
        for g in groups]}


def cmd_expand(args):
    if args.power is not None:
        if args.order is None:
            raise UsageError("--power needs --order")
        if args.power < 1 or args.order < 0:
            raise UsageError("--power must be >= 1 and --order >= 0")
        routes = {"multiset": expansion.expand_deriv_power,
                  "partition": expansion.expand_deriv_power_partition}
        if args.method == "leibniz":
            poly = expansion.leibniz_oracle(args.exp, args.order, args.power)
        else:
            poly = routes[args.method](args.exp, args.order, args.power)
        return EXIT_OK, {"exp": args.exp, "order": args.order, "power": args.power,
                         "method": args.method, "poly": poly.render()}
    spec = _spec(args)
    ans = _ansatz(args)
    lhs = equation.lhs_unchecked(spec, ans)
    return EXIT_OK, {"equation": render_equation(spec), "lhs": lhs.render(),
                     "terms": [equation.term_value(t, ans).render() for t in spec.terms]}


def cmd_constraints(args):
    spec = _spec(args)
    system = equation.extract_constraints(equation.build_lhs(spec, _ansatz(args)))
    return EXIT_OK, {"equation": render_equation(spec), "constraints": system.to_json(),
                     "unknowns": list(system.unknowns)}


def cmd_verify(args):
    spec = _spec(args)
    v = equation.verify_solution(spec, _ansatz(args))
    out = {"equation": render_equation(spec), **v.to_dict()}
    return (EXIT_OK if v.passed else EXIT_FAIL), out


def cmd_classify(args):
    spec = _spec(args)
    cl = analysis.classify_two_term(spec)
    out = cl.to_dict()
    ok = all(f.verified for f in cl.families)
    if args.samples:
        seed = _seed(args)
        out["samples"] = {}
        for f in cl.families:
            res = analysis.sample_family(f, args.samples, seed)
            out["samples"][f.family_id] = sum(v.passed for _, v in res)
            ok = ok and all(v.passed for _, v in res)
    if args.brute_force:
        bf = analysis.brute_force_two_term(spec, bound=args.grid, families=cl.families)
        out["brute_force"] = bf.to_dict()
        ok = ok and not bf.outside
    tx = analysis.two_exponential_family(spec)
    out["two_exponential"] = tx.to_dict() if tx is not None else "none"
    return (EXIT_OK if ok else EXIT_FAIL), out


def cmd_scan(args):
    spec = _spec(args)
    if args.max_order is None:
        raise UsageError("--max-order is required")
    rep = scan.conjecture_scan(spec, args.max_order, grid=args.grid, mode=args.mode,
                               max_points=args.max_points)
    out = rep.to_dict()
    if not args.full:
        for a in out["assignments"]:
            a.get("certificate", {}).pop("matrix", None)
    return (EXIT_OK if rep.consistent else EXIT_FAIL), out


def _models(args, spec):
    if args.models:
        return schema.models_from_json(schema.load_json(args.models))
    if args.ansatz:
        return concrete.realize(_ansatz(args))
    raise UsageError("--models or --ansatz is required")


def cmd_sample_check(args):
    spec = _spec(args)
    seed = _seed(args)
    models = _models(args, spec)
    if args.transport:
        models = concrete.equivalence_transport(models, parse_rational_function(args.transport))
    v = concrete.check_equation_samples(spec, models, args.samples, seed)
    out = {"equation": render_equation(spec), "verdict": "pass" if v.passed else "fail",
           **v.to_dict()}
    if args.transport:
        out["transport"] = args.transport
    return (EXIT_OK if v.passed else EXIT_FAIL), out


def cmd_polarize(args):
    if not args.models:
        raise UsageError("--models is required")
    seed = _seed(args)
    factors = list(schema.models_from_json(schema.load_json(args.models)).values())
    n = len(factors)
    m = args.m if args.m is not None else n
    if m < 1:
        raise UsageError("--m must be >= 1")
    rng = random.Random(seed)
    rows, ok = [], True
    for _ in range(args.samples):
        x = concrete.random_rf(rng)
        ys = [concrete.random_rf(rng) for _ in range(m)]
        delta = concrete.difference_polarize(factors, x, ys)
        if m > n:
            expected = concrete.RationalFunction(0)
        elif m == n:
            # sum over orderings = n! A(y) for symmetric A
            expected = concrete.RationalFunction(0)
            for perm in permutations(ys):
                expected = expected + concrete.multiadditive(factors, perm)
        else:
            expected = None
        match = None if expected is None else delta == expected
        ok = ok and match is not False
        rows.append({"x": str(x), "y": [str(y) for y in ys], "delta": str(delta),
                     "expected": None if expected is None else str(expected), "match": match})
    out = {"n": n, "m": m, "seed": seed, "n_factorial": factorial(n), "samples": rows,
           "verdict": "pass" if ok else "fail"}
    return (EXIT_OK if ok else EXIT_FAIL), out


def cmd_corollary(args):
    params = {"grid": args.grid}
    if args.max_order is not None:
        params["max_order"] = args.max_order
    if args.kind in ("kappa-fg", "kappa-ff"):
        if args.kappa is None or args.N is None or args.p is None or args.q is None:
            raise UsageError(f"{args.kind} needs --kappa, --N, --p and --q")
        params.update(kappa=Fraction(args.kappa), N=args.N, p=args.p, q=args.q)
    else:
        params["spec"] = _spec(args)
        if args.c:
            params["c"] = [Fraction(c) for c in args.c.split(",")]
    res = corollaries.corollary_specialization(args.kind, params)
    return (EXIT_OK if res.passed else EXIT_FAIL), res.to_dict()


COMMANDS = {
    "check": cmd_check, "homogenize": cmd_homogenize, "expand": cmd_expand,
    "constraints": cmd_constraints, "verify": cmd_verify, "classify": cmd_classify,
    "scan": cmd_scan, "sample-check": cmd_sample_check, "polarize": cmd_polarize,
    "corollary": cmd_corollary,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="funceq", description="Exact analysis of mixed functional equations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, eq=True, ansatz=False, models=False, seed=False):
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="compact JSON (default)")
        fmt.add_argument("--pretty", action="store_true", help="human-readable report")
        if eq:
            p.add_argument("--eq", metavar="PATH", help="equation file")
            p.add_argument("--equation", metavar="TEXT", help="equation text")
        if ansatz:
            p.add_argument("--ansatz", metavar="PATH")
        if models:
            p.add_argument("--models", metavar="PATH")
        if seed:
            p.add_argument("--seed", type=int)
            p.add_argument("--samples", type=int, default=20)
        return p

    common(sub.add_parser("check", help="conditions on the exponents"))
    common(sub.add_parser("homogenize", help="split by total degree"))
    p = common(sub.add_parser("expand", help="expand d^k(m(x)^p) or an equation's left side"), ansatz=True)
    p.add_argument("--power", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--exp", type=int, default=0)
    p.add_argument("--method", choices=("multiset", "partition", "leibniz"), default="multiset")
    common(sub.add_parser("constraints", help="coefficient constraints of an ansatz"), ansatz=True)
    common(sub.add_parser("verify", help="check a numeric ansatz"), ansatz=True)
    p = common(sub.add_parser("classify", help="two-term order <= 1 families"), seed=True)
    p.set_defaults(samples=0)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--grid", type=int, default=3)
    p = common(sub.add_parser("scan", help="bounded-order solution scan"))
    p.add_argument("--max-order", type=int)
    p.add_argument("--grid", type=int, default=3)
    p.add_argument("--mode", choices=("leading", "nonzero"), default="leading")
    p.add_argument("--max-points", type=int, default=scan.DEFAULT_MAX_POINTS)
    p.add_argument("--full", action="store_true", help="include elimination matrices")
    p = common(sub.add_parser("sample-check", help="evaluate in Q(t) at random points"),
               ansatz=True, models=True, seed=True)
    p.add_argument("--transport", metavar="EXPR", help="post-compose with t -> EXPR")
    p = common(sub.add_parser("polarize", help="difference operators on a product of models"),
               eq=False, models=True, seed=True)
    p.add_argument("--m", type=int, help="number of increments (default: number of factors)")
    p = common(sub.add_parser("corollary", help="corollary specializations"))
    p.add_argument("--kind", required=True, choices=corollaries.KINDS)
    p.add_argument("--kappa")
    p.add_argument("--N", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--c", help="comma-separated constants")
    p.add_argument("--max-order", type=int)
    p.add_argument("--grid", type=int, default=3)
    return ap


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _scalar(v):
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        code, payload = COMMANDS[args.command](args)
    except (UsageError, FunctionalEquationError, OSError, ValueError, ZeroDivisionError) as e:
        err = {"type": type(e).__name__, "message": str(e)}
        if isinstance(e, ParseError):
            err.update(line=e.line, column=e.column, message=e.message)
        payload = {"schema_version": schema.SCHEMA_VERSION, "command": args.command, "error": err}
        print(f"funceq {args.command}: {e}", file=sys.stderr)
        print(schema.dumps(payload))
        return EXIT_USAGE
    payload = {"schema_version": schema.SCHEMA_VERSION, "command": args.command, **payload}
    if args.pretty:
        print(render_text(payload))
    else:
        print(schema.dumps(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
