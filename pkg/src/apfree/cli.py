"""Command-line interface.

Exit status: 0 success, 1 verification failure, 2 input error, 3 budget
refusal. Errors are reported as one JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import facts as facts_mod
from .geometry import (
    area_T,
    area_T_by_integration,
    format_rational,
    parse_rational,
    phi_image,
    phi_preimage_T,
    region_svg,
)
from .lifting import (
    DEFAULT_ENUM_BUDGET,
    DEFAULT_PAIR_BUDGET,
    LiftSpec,
    certify_lift,
    format_vectors,
    lifted_set,
    parse_vectors,
)
from .reducibility import PeelCertificate, greedy_peel, relaxed_peel, verify_certificate
from .search import (
    DEFAULT_REFINE_DEPTH,
    bounds_table,
    grid_search_alpha_beta,
    table_csv,
    table_json,
)
from .zm import BudgetError, InputError, SiteSet, count_three_term_progressions, find_three_term_progression

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(args, text: str) -> None:
    if args.output and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args) -> dict:
    skip = {"func", "output", "input", "threads"}
    out = {"command": args.command}
    for k, v in sorted(vars(args).items()):
        if k in skip or k == "command":
            continue
        out[k] = format_rational(v) if isinstance(v, Fraction) else v
    return out


def _load_json(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _load_set_or_certificate(text: str):
    obj = _load_json(text)
    if isinstance(obj, dict) and "removed" in obj:
        cert = PeelCertificate.from_dict(obj)
        return cert.original(), cert
    return SiteSet.from_dict(obj), None


def _alpha_beta(args):
    m = args.m
    alpha = args.alpha if args.alpha is not None else Fraction(1, 48 * m)
    beta = args.beta if args.beta is not None else Fraction(1, 48 * m)
    return alpha, beta


# Subcommands.

def cmd_construct(args) -> int:
    if args.search:
        res = grid_search_alpha_beta(args.m)
        alpha, beta = res.alpha, res.beta
    else:
        alpha, beta = _alpha_beta(args)
    S = phi_preimage_T(args.m, alpha, beta)
    out = S.to_dict()
    out["config"] = _config(args)
    out["alpha"], out["beta"] = format_rational(alpha), format_rational(beta)
    _write(args, _dump(out))
    return EXIT_OK


def cmd_peel(args) -> int:
    text = _read(args.input)
    S, _ = _load_set_or_certificate(text)
    if args.strategy == "relaxed":
        cert = relaxed_peel(S)
    else:
        alpha = beta = None
        if args.strategy == "sorted_potential":
            obj = _load_json(text)
            alpha = args.alpha if args.alpha is not None else obj.get("alpha")
            beta = args.beta if args.beta is not None else obj.get("beta")
            if alpha is None or beta is None:
                raise InputError("sorted_potential needs --alpha and --beta")
            alpha, beta = parse_rational(alpha), parse_rational(beta)
        cert = greedy_peel(S, args.strategy, seed=args.seed, alpha=alpha, beta=beta)
    out = cert.to_dict()
    out["config"] = _config(args)
    _write(args, _dump(out))
    if args.assert_reducible and cert.core:
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify_certificate(args) -> int:
    cert = PeelCertificate.from_dict(_load_json(_read(args.input)))
    ok, reason = verify_certificate(cert)
    report = {
        "valid": ok,
        "reason": reason,
        "reducible": ok and not cert.core,
        "removed": len(cert.removed),
        "core": len(cert.core),
    }
    _write(args, _dump(report))
    if not ok or (args.assert_reducible and cert.core):
        return EXIT_FAIL
    return EXIT_OK


def cmd_lift(args) -> int:
    S, cert = _load_set_or_certificate(_read(args.input))
    if args.certificate:
        cert = PeelCertificate.from_dict(_load_json(_read(args.certificate)))
    spec = LiftSpec(S, args.ell, args.n, certificate=cert, override=args.override)
    A = lifted_set(spec, budget=args.budget)
    info = {"n": spec.n, "n_prime": spec.n_prime, "padding": spec.padding, "size": len(A)}
    if args.format == "text":
        sys.stderr.write(_dump({"info": info}))
        _write(args, format_vectors(A.points))
    else:
        out = A.to_dict()
        out["config"] = _config(args)
        out["lift"] = info
        _write(args, _dump(out))
    return EXIT_OK


def cmd_verify_apfree(args) -> int:
    text = _read(args.input)
    if text.lstrip().startswith("{"):
        A = SiteSet.from_dict(_load_json(text))
    else:
        if args.m is None:
            raise InputError("--m is required for the line-per-vector format")
        A = parse_vectors(text, args.m)
    if len(A) ** 2 > args.pair_budget:
        raise BudgetError(f"{len(A)}^2 pair checks exceed budget {args.pair_budget}")
    witness = find_three_term_progression(A)
    count = count_three_term_progressions(A) if witness else 0
    summary = f"{len(A)} points, {count} progressions"
    if args.format == "text":
        _write(args, summary + "\n")
    else:
        _write(args, _dump({
            "points": len(A),
            "progressions": count,
            "progression_free": witness is None,
            "witness": [list(p) for p in witness] if witness else None,
            "summary": summary,
        }))
    return EXIT_OK if witness is None else EXIT_FAIL


def cmd_search(args) -> int:
    res = grid_search_alpha_beta(
        args.m, step=args.step, exhaustive=args.exhaustive, max_refine=args.max_refine
    )
    out = res.to_dict()
    if not args.timing:
        out.pop("wall_time")
    out["config"] = _config(args)
    _write(args, _dump(out))
    return EXIT_OK if res.success else EXIT_FAIL


def cmd_table(args) -> int:
    rows = bounds_table(args.m_max, m_min=args.m_min, exhaustive=not args.early_exit)
    _write(args, table_csv(rows) if args.format == "csv" else table_json(rows))
    return EXIT_OK


def cmd_area(args) -> int:
    shoe = area_T()
    integ = area_T_by_integration()
    agree = shoe == integ
    if args.format == "json":
        _write(args, _dump({
            "total": format_rational(shoe.total),
            "T1": format_rational(shoe.T1),
            "T2": format_rational(shoe.T2),
            "integration_agrees": agree,
        }))
    else:
        _write(args, f"{shoe.total}\nT1 {shoe.T1}\nT2 {shoe.T2}\n")
    return EXIT_OK if agree else EXIT_FAIL


def cmd_facts_test(args) -> int:
    try:
        dens = [int(x) for x in args.denominators.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad denominator list {args.denominators!r}") from None
    if not dens or any(d < 1 for d in dens):
        raise InputError("denominators must be positive integers")
    results = facts_mod.check_facts(dens)
    ok = all(r.ok for r in results)
    _write(args, _dump({"ok": ok, "results": [r.to_dict() for r in results]}))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_export_svg(args) -> int:
    points = []
    if args.input:
        text = _read(args.input)
        S, _ = _load_set_or_certificate(text)
        if S.d != 2:
            raise InputError("only sets in Z_m^2 can be drawn")
        obj = _load_json(text)
        alpha = args.alpha if args.alpha is not None else parse_rational(obj.get("alpha", 0))
        beta = args.beta if args.beta is not None else parse_rational(obj.get("beta", 0))
        points = phi_image(S.m, alpha, beta, S.points)
    _write(args, region_svg(args.size, points))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apfree", description="Construct and verify progression-free sets in Z_m^n.")
    parser.add_argument("--threads", type=int, default=1, help="worker cap (results never depend on it)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        p.set_defaults(func=func)
        return p

    rat = parse_rational

    p = add("construct", cmd_construct, "preimage of T under phi_{alpha,beta} as SiteSet JSON")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=rat, default=None, help='"p/q"; default 1/(48m)')
    p.add_argument("--beta", type=rat, default=None, help='"p/q"; default 1/(48m)')
    p.add_argument("--search", action="store_true", help="pick alpha, beta by grid search")

    p = add("peel", cmd_peel, "peel non-mid-points and emit a certificate")
    p.add_argument("--input", default="-")
    p.add_argument("--strategy", default="lexicographic",
                   choices=("lexicographic", "random", "sorted_potential", "relaxed"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--alpha", type=rat, default=None)
    p.add_argument("--beta", type=rat, default=None)
    p.add_argument("--assert-reducible", action="store_true", help="exit 1 if the core is non-empty")

    p = add("verify-certificate", cmd_verify_certificate, "replay a peel certificate")
    p.add_argument("--input", default="-")
    p.add_argument("--assert-reducible", action="store_true")

    p = add("lift", cmd_lift, "balanced-tuple lift of a reducible block")
    p.add_argument("--input", default="-", help="SiteSet or certificate JSON")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="target dimension (default d*|S|*ell)")
    p.add_argument("--certificate", default=None)
    p.add_argument("--override", action="store_true", help="lift uncertified or relaxed blocks")
    p.add_argument("--budget", type=int, default=DEFAULT_ENUM_BUDGET)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = add("verify-apfree", cmd_verify_apfree, "brute-force three-term progression scan")
    p.add_argument("--input", default="-")
    p.add_argument("--m", type=int, default=None, help="modulus for text input")
    p.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = add("search", cmd_search, "grid search over (alpha, beta)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--step", type=rat, default=None, help='grid step "p/q"; default 1/(24m)')
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--max-refine", type=int, default=DEFAULT_REFINE_DEPTH)
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")

    p = add("table", cmd_table, "box baseline vs searched preimage sizes")
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--m-min", type=int, default=2)
    p.add_argument("--early-exit", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("area", cmd_area, "exact area of T and its two parts")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("facts-test", cmd_facts_test, "check the structural facts about T on rational grids")
    p.add_argument("--denominators", default="12,24,60,120")

    p = add("export-svg", cmd_export_svg, "draw T (solid: closed boundary, dotted: open)")
    p.add_argument("--input", default=None, help="optional SiteSet to overlay via phi")
    p.add_argument("--alpha", type=rat, default=None)
    p.add_argument("--beta", type=rat, default=None)
    p.add_argument("--size", type=int, default=480)
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(_dump({"error": kind, "message": message, "exit": code}))
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise InputError("--threads must be at least 1")
        return args.func(args)
    except BudgetError as exc:
        return _fail(EXIT_BUDGET, "budget", str(exc))
    except InputError as exc:
        return _fail(EXIT_INPUT, "input", str(exc))


if __name__ == "__main__":
    sys.exit(main())
