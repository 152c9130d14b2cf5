"""Command-line entry point.

Exit codes: 0 success, 1 a verification suite found counterexamples,
2 bad input, 3 an internal invariant or arithmetic check failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .abelian import Rationals, ZShape, ext_group, hom_group, parse_group
from .config import ConfigError, parse_scenario
from .groups import FiniteGroup, group_from_text, named_group
from .grpcoh import cohomology_group
from .intmat import IntMatrix, smith_normal_form
from .obstruction import InvariantBreach, compute_report, sign_ledger_text
from .report import dumps_report, report_to_text
from .verify import SUITES, run_suite

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _module(text: str):
    """'Q/Z', '(Q/Z)^m', 'Q', 'Q^m' or an abelian group name."""
    s = text.strip().replace(" ", "")
    m = re.fullmatch(r"\(?Q/Z\)?(?:\^(\d+))?", s)
    if m:
        return ZShape(int(m.group(1) or 1))
    m = re.fullmatch(r"Q(?:\^(\d+))?", s)
    if m:
        return Rationals(int(m.group(1) or 1))
    return parse_group(text)


def _arg(name: str, parse, text: str):
    """Parse one command-line argument, tagging any error with the argument name."""
    try:
        return parse(text)
    except ValueError as exc:
        raise ConfigError([f"argument {name}: {exc}"]) from None


def _finite_group(text: str) -> FiniteGroup:
    p = Path(text)
    if p.is_file():
        return group_from_text(p.read_text(encoding="utf-8"), str(p))
    return named_group(text)


def _emit(args, text: str, machine: dict) -> None:
    if args.format == "machine":
        sys.stdout.write(json.dumps(machine, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    cfg = parse_scenario(args.scenario)
    report = compute_report(cfg.extension, cfg.bundle)
    ledger = args.sign_ledger or cfg.sign_ledger
    if args.format == "machine":
        sys.stdout.write(dumps_report(report))
        if ledger:
            sys.stderr.write(sign_ledger_text())
    else:
        sys.stdout.write(report_to_text(report, ledger, max(args.verbose, cfg.verbosity)))
    return EXIT_OK


def cmd_verify(args) -> int:
    res = run_suite(args.suite, n=args.n, gamma=args.gamma, jobs=args.jobs, fault=args.inject_fault)
    machine = {
        "suite": res.suite,
        "passed": res.passed,
        "checked": res.checked,
        "cases": [{"label": c.label, "checked": c.checked,
                   "counterexamples": [t for t in c.counterexamples if t]} for c in res.cases],
    }
    _emit(args, res.summary(), machine)
    if args.sign_ledger and args.format != "machine":
        sys.stdout.write(sign_ledger_text())
    return EXIT_OK if res.passed else EXIT_COUNTEREXAMPLE


def cmd_snf(args) -> int:
    p = Path(args.matrix)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"{p}: {exc.strerror}"]) from None
    m = IntMatrix.from_text(text, str(p))
    u, s, v = smith_normal_form(m)
    diag = [s.entries[i][i] for i in range(min(s.rows, s.cols)) if s.entries[i][i]]
    out = [f"invariant factors: {' '.join(map(str, diag)) or '(none)'}", "S:", s.to_text().rstrip("\n"),
           "U:", u.to_text().rstrip("\n"), "V:", v.to_text().rstrip("\n")]
    machine = {"invariant_factors": diag, "S": [list(r) for r in s.entries],
               "U": [list(r) for r in u.entries], "V": [list(r) for r in v.entries]}
    _emit(args, "\n".join(out) + "\n", machine)
    return EXIT_OK


def cmd_ext(args) -> int:
    a, b = _arg("A", parse_group, args.A), _arg("B", parse_group, args.B)
    e, h = ext_group(a, b), hom_group(a, b)
    text = f"Hom({a}, {b}) = {h}\nExt({a}, {b}) = {e}\n"
    _emit(args, text, {"A": a.to_json(), "B": b.to_json(), "hom": h.to_json(), "ext": e.to_json()})
    return EXIT_OK


def cmd_grpcoh(args) -> int:
    g = _arg("G", _finite_group, args.G)
    mod = _arg("M", _module, args.M)
    if g.order > args.bound:
        raise ConfigError([f"argument G: group order {g.order} exceeds the bound {args.bound} (raise it with --bound)"])
    h = _arg("degree", lambda _: cohomology_group(g, mod, args.degree, bound=args.bound), str(args.degree))
    name = g.name or args.G
    mname = args.M.strip()
    _emit(args, f"H^{args.degree}({name}; {mname}) = {h}\n",
          {"group_order": g.order, "module": mname, "degree": args.degree, "cohomology": h.to_json()})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text",
                        help="human-readable text or JSON (default: text)")
    common.add_argument("--sign-ledger", action="store_true", help="also print the sign convention table")

    ap = argparse.ArgumentParser(prog="liftobs", description="Lifting obstructions for bundles along central extensions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="compute the obstruction report of a scenario")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", parents=[common], help="run a brute-force verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--n", type=int, default=None, help="size parameter (sphere dimension or group order)")
    p.add_argument("--gamma", default=None, help="coefficient group Z/k")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--inject-fault", action="store_true", help="perturb the checked formula on purpose")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("snf", parents=[common], help="Smith normal form of an integer matrix file")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("ext", parents=[common], help="Hom and Ext of two finitely generated abelian groups")
    p.add_argument("A")
    p.add_argument("B")
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("grpcoh", parents=[common], help="cohomology of a finite group with trivial coefficients")
    p.add_argument("G", help="group name (Z/n, Z/a x Z/b, Q8, D8) or table file")
    p.add_argument("M", help="coefficients: an abelian group name, Q/Z or Q")
    p.add_argument("degree", type=int)
    p.add_argument("--bound", type=int, default=8, help="largest group order accepted")
    p.set_defaults(func=cmd_grpcoh)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantBreach, ArithmeticError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
