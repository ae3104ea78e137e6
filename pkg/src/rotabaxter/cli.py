"""Command-line front end.

Exit codes: 0 success, 1 a check did not reach its expected verdict,
2 usage, parse or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import field_theory as ft
from .exact_rings import format_qpoly, q_binomial
from .expr import EvalError, ParseError, eval_text
from .poset import FinitePoset, PosetError, exhaustive_poset_check
from .series import SeriesError, format_series, series_to_json
from .species import SpeciesError, species_from_json
from .suites import DEFAULT_SEED, SUITES, dump_json, poset_checks_for, run_checks, run_suite, suite_report

EXIT_OK, EXIT_UNEXPECTED, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("seed must be an integer, got %r" % text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got %r" % text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer, got %d" % v)
    return v


def _load_json(arg: str):
    """A file path, ``-`` for stdin, or an inline JSON object."""
    try:
        if arg == "-":
            return json.load(sys.stdin)
        if arg.lstrip().startswith(("{", "[")):
            return json.loads(arg)
        with open(arg, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise InputError("cannot read %s: %s" % (arg, err.strerror))
    except json.JSONDecodeError as err:
        raise InputError("invalid JSON in %s: line %d, column %d: %s" % (arg, err.lineno, err.colno, err.msg))


def _emit(args, text: str, data) -> None:
    out = dump_json(data) if args.json else text.rstrip("\n") + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _check_lines(report: dict) -> str:
    lines = []
    for c in report["checks"]:
        r = c["report"]
        mark = "ok  " if c["ok"] else "FAIL"
        note = "" if c["expect"] == "holds" else " (expected to fail)"
        lines.append("%s %-40s %s%s" % (mark, c["id"], r["verdict"], note))
        if r["witness"] is not None and r["verdict"] == "fails":
            lines.append("     witness: %s" % json.dumps(r["witness"], sort_keys=True))
    passed = sum(c["ok"] for c in report["checks"])
    lines.append("%d/%d checks as expected (suite %s, seed %s)" % (passed, len(report["checks"]),
                                                                   report["suite"], report["seed"]))
    return "\n".join(lines)


# -- subcommands -------------------------------------------------------------

def cmd_check(args) -> int:
    if args.poset:
        if args.suite != "poset":
            raise InputError("--poset only applies to the poset suite")
        X = FinitePoset.from_json(_load_json(args.poset))
        results = run_checks(poset_checks_for(X), args.seed, args.order, args.samples)
        report = suite_report("poset:%s" % X.name, results, args.seed, args.order, args.samples)
        code = EXIT_OK if report["ok"] else EXIT_UNEXPECTED
    else:
        code, report = run_suite(args.suite, args.seed, args.order, args.samples)
    _emit(args, _check_lines(report), report)
    return code


def cmd_report(args) -> int:
    args.json = True
    code, report = run_suite(args.suite, args.seed, args.order, args.samples)
    _emit(args, "", report)
    return code


def cmd_eval(args) -> int:
    f = eval_text(args.expression, 10 if args.order is None else args.order)
    _emit(args, format_series(f), series_to_json(f))
    return EXIT_OK


def cmd_qbinom(args) -> int:
    if args.k > args.n:
        raise InputError("need 0 <= k <= n")
    p = q_binomial(args.n, args.k)
    _emit(args, format_qpoly(p), {"n": args.n, "k": args.k, "value": format_qpoly(p)})
    return EXIT_OK


def cmd_species(args) -> int:
    F = species_from_json(_load_json(args.species))
    order = F.bound if args.order is None else min(args.order, F.bound)
    counts = [F.count(n) for n in range(order + 1)]
    v = F.valuation(order)
    text = "%s\ncounts: %s\nvaluation: %s" % (F.name, " ".join(map(str, counts)), format_series(v))
    _emit(args, text, {"species": F.name, "counts": counts, "valuation": series_to_json(v)})
    return EXIT_OK


def cmd_poset(args) -> int:
    X = FinitePoset.from_json(_load_json(args.poset))
    le, lt = exhaustive_poset_check(X, False), exhaustive_poset_check(X, True)
    text = "%s: n=%d covers=%s locally_chain=%s\nP_<= (weight -1): %s\nP_<  (weight +1): %s" % (
        X.name, X.n, X.covers(), X.is_locally_chain(), le.verdict, lt.verdict)
    _emit(args, text, {"poset": X.to_json(), "locally_chain": X.is_locally_chain(),
                       "checks": [le.to_json(), lt.to_json()]})
    return EXIT_OK


def cmd_el(args) -> int:
    U = ft.Universe(args.d, args.k)
    l = ft.phase_from_json(_load_json(args.lagrangian), U)
    cap = ft.max_jet_order(l) if args.cap is None else args.cap
    e = ft.euler_lagrange(l, args.j, cap)
    _emit(args, ft.format_phase(e), ft.phase_to_json(e))
    return EXIT_OK


def cmd_moyal(args) -> int:
    f = ft.phase_from_json(_load_json(args.f))
    g = ft.phase_from_json(_load_json(args.g), f.universe)
    h = args.hbar_order
    f = ft.PhaseSeries(f.universe, f.terms, f.order, max(f.hbar_order, h))
    g = ft.PhaseSeries(g.universe, g.terms, g.order, max(g.hbar_order, h))
    s = ft.moyal_star(f, g, h)
    _emit(args, ft.format_phase(s), ft.phase_to_json(s))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=DEFAULT_SEED, help="sampling seed (default %(default)s)")
    common.add_argument("--order", type=_nonneg, help="truncation order")
    common.add_argument("--samples", type=_nonneg, help="random pairs per check")
    common.add_argument("--json", action="store_true", help="emit canonical JSON")
    common.add_argument("--out", help="write output to a file instead of stdout")

    p = argparse.ArgumentParser(prog="rotabaxter", description="Exact Rota-Baxter operator checks.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="run a check suite")
    c.add_argument("suite", choices=("all",) + SUITES)
    c.add_argument("--poset", help="poset JSON {n, covers} to check instead of the built-in family")
    c.set_defaults(fn=cmd_check)

    r = sub.add_parser("report", parents=[common], help="run a suite and write its JSON report")
    r.add_argument("suite", nargs="?", default="all", choices=("all",) + SUITES)
    r.set_defaults(fn=cmd_report)

    e = sub.add_parser("eval", parents=[common], help="evaluate a series expression")
    e.add_argument("expression")
    e.set_defaults(fn=cmd_eval)

    q = sub.add_parser("qbinom", parents=[common], help="Gaussian binomial binom(n, k)_q")
    q.add_argument("n", type=_nonneg)
    q.add_argument("k", type=_nonneg)
    q.set_defaults(fn=cmd_qbinom)

    s = sub.add_parser("species", parents=[common], help="structure counts of a species JSON")
    s.add_argument("species", help="file, '-' or inline JSON")
    s.set_defaults(fn=cmd_species)

    o = sub.add_parser("poset", parents=[common], help="inspect a poset and check P_<= and P_<")
    o.add_argument("poset", help="file, '-' or inline JSON")
    o.set_defaults(fn=cmd_poset)

    l = sub.add_parser("el", parents=[common], help="Euler-Lagrange operator of a Lagrangian")
    l.add_argument("lagrangian", help="PhaseSeries JSON: file, '-' or inline")
    l.add_argument("--d", type=int, required=True, help="base dimension")
    l.add_argument("--k", type=int, required=True, help="number of fields")
    l.add_argument("--j", type=int, required=True, help="field index to vary")
    l.add_argument("--cap", type=_nonneg, help="largest |I| to sum over (default: jet order of l)")
    l.set_defaults(fn=cmd_el)

    m = sub.add_parser("moyal", parents=[common], help="Moyal star product of two PhaseSeries")
    m.add_argument("f")
    m.add_argument("g")
    m.add_argument("--hbar-order", type=_nonneg, default=1)
    m.set_defaults(fn=cmd_moyal)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as err:
        print("parse error: %s" % err, file=sys.stderr)
    except (InputError, EvalError, SeriesError, PosetError, SpeciesError, ft.FieldError,
            KeyError, TypeError, ValueError) as err:
        print("error: %s" % err, file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
