"""Command-line front end.

Exit codes: 0 success, 1 internal assertion failure, 2 input error,
3 resource guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import acceptance, dlim, fextcat, fgab, koszul, torlab
from .fgab import format_group, group_json, parse_group
from .presentation import canonical_presentation

EXIT_OK, EXIT_ASSERT, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(args, text_lines: Sequence[str], payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _group(expr: str) -> fgab.FgAbGroup:
    try:
        return parse_group(expr)
    except fgab.GroupParseError as e:
        raise InputError(f"cannot parse {expr!r}: {e}") from None


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


# ---------------------------------------------------------------------------


def cmd_group(args) -> int:
    G = _group(args.expr)
    r, tors = G.invariant_factors()
    _emit(args, [f"({r}, {list(tors)})"], group_json(G))
    return EXIT_OK


def cmd_tor(args) -> int:
    groups = [_group(e) for e in args.exprs]
    if len(groups) == 1:
        A = groups[0]
        n = args.arity or 2
        if n < 2:
            raise InputError("--arity must be at least 2")
        methods = list(torlab.METHODS) if args.method == "all" else [args.method]
        results = {m: torlab.tor_bracket_by(m, A, n) for m in methods}
    else:
        if args.arity and args.arity != len(groups):
            raise InputError(f"--arity {args.arity} does not match {len(groups)} groups")
        k = len(groups)
        if args.method == "all":
            methods = ["resolution", "intersection"] if k == 2 else ["resolution"]
        elif args.method == "resolution" or (args.method == "intersection" and k == 2):
            methods = [args.method]
        else:
            raise InputError(f"method {args.method!r} needs a single repeated group")
        results = {}
        for m in methods:
            if m == "resolution":
                results[m] = torlab.tor_multi(groups, len(groups) - 1)
            else:
                p1, p2 = canonical_presentation(groups[0]), canonical_presentation(groups[1])
                results[m] = torlab.tor_pair_intersection(p1, p2)
    if len(results) == 1:
        (G,) = results.values()
        _emit(args, [format_group(G)], {"group": group_json(G)})
        return EXIT_OK
    ref = next(iter(results.values()))
    agree = all(fgab.is_isomorphic(G, ref) for G in results.values())
    lines = [f"{m}: {format_group(G)}" for m, G in results.items()]
    lines.append("AGREE" if agree else "DISAGREE")
    _emit(args, lines, {"methods": {m: group_json(G) for m, G in results.items()}, "agree": agree})
    return EXIT_OK if agree else EXIT_ASSERT


def cmd_derived(args) -> int:
    A = _group(args.expr)
    n, i = args.n, args.i
    if n < 1 or not 0 <= i <= n:
        raise InputError(f"need n >= 1 and 0 <= i <= n, got n={n}, i={i}")
    p = canonical_presentation(A)
    if args.via == "kernel":
        if n < 2 or i != n - 1:
            raise InputError("--via kernel computes only i = n-1 with n >= 2")
        G = (koszul.top_derived_sp_via_kernel(p, n) if args.functor == "sp"
             else koszul.top_derived_lambda_via_kernel(p, n))
    else:
        G = koszul.derived_sp(p, n, i) if args.functor == "sp" else koszul.derived_lambda(p, n, i)
    _emit(args, [format_group(G)], {"group": group_json(G)})
    return EXIT_OK


def cmd_lim(args) -> int:
    if not 0 <= args.degree <= 2:
        raise InputError("only degrees 0, 1, 2 are supported")
    spec = _load_json(args.diagram)
    try:
        D = dlim.load_diagram(spec)
    except (dlim.DiagramError, dlim.CategoryError) as e:
        raise InputError(f"invalid diagram: {e}") from None
    G = dlim.lim_n(D, args.degree)
    _emit(args, [format_group(G)], {"degree": args.degree, "group": group_json(G)})
    return EXIT_OK


def cmd_extcat(args) -> int:
    recipe = _load_json(args.recipe)
    try:
        A = _group(recipe["base"])
        tag = fextcat.recipe_functor(recipe, A)
        T = fextcat.build_truncation(A, recipe)
        D = fextcat.truncated_diagram(A, tag, recipe, truncation=T)
    except (KeyError, TypeError, IndexError) as e:
        raise InputError(f"malformed recipe: {e!r}") from None
    except (ValueError, dlim.CategoryError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"invalid recipe: {e}") from None
    L, _ = dlim.lim(D)
    lines = [f"functor: {tag.label()}"]
    objs = {}
    for name in T.names:
        lines.append(f"{name}: {format_group(D.objects[name])}")
        objs[name] = group_json(D.objects[name])
    lines.append(f"morphisms: {len(T.category)}")
    lines.append(f"lim: {format_group(L)}")
    payload = {"functor": tag.label(), "objects": objs, "morphisms": len(T.category),
               "lim": group_json(L)}
    if tag.kind == "tensor_quot" and any(n.startswith("f1") for n in T.morphisms):
        tb = torlab.tor_bracket(A, tag.n)
        lines.append(f"Tor^[{tag.n}]: {format_group(tb)}")
        payload["tor_bracket"] = group_json(tb)
    probe = fextcat.coproduct_vanishing_probe(A, tag, recipe)
    if probe.applicable:
        lines.append(f"coproduct probe: {probe.status}")
        payload["coproduct_probe"] = probe.status
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        results = acceptance.run_suite(args.suite)
    except KeyError:
        raise InputError(f"unknown suite {args.suite!r}; choose from {sorted(acceptance.SUITES)}") from None
    ok = all(r.ok for r in results)
    lines = [r.line(args.timings) for r in results]
    lines.append("ALL PASS" if ok else "SOME FAILED")
    payload = {"suite": args.suite, "passed": ok, "criteria": [
        {"number": r.number, "name": r.name, "passed": r.ok, "checks": r.checks,
         "limit_seconds": r.limit,
         "failures": r.failures[:10]} for r in results]}
    _emit(args, lines, payload)
    return EXIT_OK if ok else EXIT_ASSERT


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    ap = argparse.ArgumentParser(prog="extlim", description="Exact computations with "
                                 "abelian groups, derived functors and derived limits.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="invariant factors of a group")
    p.add_argument("expr")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("tor", parents=[common], help="multi-argument Tor")
    p.add_argument("exprs", nargs="+")
    p.add_argument("--arity", type=int, default=None)
    p.add_argument("--method", default="resolution", choices=list(torlab.METHODS) + ["all"])
    p.set_defaults(func=cmd_tor)

    p = sub.add_parser("derived", parents=[common], help="derived functors of SP^n and Λ^n")
    p.add_argument("expr")
    p.add_argument("--functor", required=True, choices=["sp", "lambda"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--via", choices=["koszul", "kernel"], default="koszul")
    p.set_defaults(func=cmd_derived)

    p = sub.add_parser("lim", parents=[common], help="lim^n of a diagram file")
    p.add_argument("--diagram", required=True)
    p.add_argument("--degree", type=int, default=0)
    p.set_defaults(func=cmd_lim)

    p = sub.add_parser("extcat", parents=[common], help="evaluate a truncation recipe")
    p.add_argument("--recipe", required=True)
    p.set_defaults(func=cmd_extcat)

    p = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--timings", action="store_true", help="show per-criterion wall time")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except torlab.SizeGuardError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except AssertionError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_ASSERT


if __name__ == "__main__":
    sys.exit(main())
