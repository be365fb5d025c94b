"""Command-line front end.

    gosil check theory.gos [--derivation] [--trace] [--json]
    gosil elaborate theory.gos
    gosil ground theory.gos [--trace]
    gosil eval theory.gos --structure s.str [--nat-bound N] [--json]
    gosil models theory.gos --bound T=n ... [--limit k] [--nat-bound N]

Exit codes: 0 when everything succeeded (all axioms well-typed / true /
some model found), 1 on a type error or a false axiom or no models, and 2
on usage, parse, or I/O errors. Identical invocations produce byte-identical
output; every diagnostic goes through one formatter carrying
file:line:column when known.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ast
from .elaboration import elaborate
from .errors import GosilError, ParseError, StructureError, TypingError
from .grounding import build_intensional_interp, ground_trace, is_intensional
from .models import find_models
from .parser import parse_theory
from .semantics import evaluate, format_structure, parse_structure
from .typecheck import (
    check_sentence,
    derivation_to_dict,
    initial_context,
    render_derivation,
)


def _diagnostic(path: str, err: GosilError, fallback_loc=None) -> str:
    loc = err.loc or fallback_loc
    where = f"{path}:{loc}" if loc is not None else path
    return f"{where}: error: {err.kind}: {err.message}"


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as err:
        raise FileNotFoundError(f"{path}: cannot read: {err.strerror}") from err


def _load_theory(path: str) -> ast.Theory:
    return parse_theory(_read(path))


def cmd_check(args, out) -> int:
    theory = _load_theory(args.theory)
    failures = 0
    records = []
    for axiom in theory.axioms:
        record: dict = {"label": axiom.label}
        if args.trace and is_intensional(theory.vocabulary, axiom.formula):
            interp = build_intensional_interp(theory)
            for step, formula in ground_trace(axiom.formula, interp):
                out.write(f"{axiom.label}: {step}: {ast.format_formula(formula)}\n")
        try:
            derivation = check_sentence(theory, axiom.formula)
        except TypingError as err:
            failures += 1
            out.write(f"{axiom.label}: ill-typed\n")
            out.write(_diagnostic(args.theory, err, axiom.loc) + "\n")
            record["verdict"] = "ill-typed"
            record["error"] = {
                "kind": err.kind,
                "message": err.message,
                "expected": err.expected,
                "found": err.found,
                "line": (err.loc or axiom.loc).line if (err.loc or axiom.loc) else None,
                "column": (err.loc or axiom.loc).column if (err.loc or axiom.loc) else None,
            }
        else:
            out.write(f"{axiom.label}: well-typed\n")
            record["verdict"] = "well-typed"
            record["error"] = None
            if derivation.note:
                out.write(f"{axiom.label}: {derivation.note}\n")
            if args.derivation:
                out.write(render_derivation(derivation) + "\n")
                record["derivation"] = derivation_to_dict(derivation)
        records.append(record)
    if args.json:
        out.write(json.dumps({"command": "check", "axioms": records}, sort_keys=True) + "\n")
    return 1 if failures else 0


def cmd_elaborate(args, out) -> int:
    theory = _load_theory(args.theory)
    ctx = initial_context(theory.vocabulary)
    status = 0
    for axiom in theory.axioms:
        try:
            expanded = elaborate(ctx, axiom.formula)
        except GosilError as err:
            out.write(_diagnostic(args.theory, err, axiom.loc) + "\n")
            status = 1
            continue
        out.write(f"{axiom.label}: {ast.format_formula(expanded)}\n")
    return status


def cmd_ground(args, out) -> int:
    theory = _load_theory(args.theory)
    interp = build_intensional_interp(theory)
    status = 0
    for axiom in theory.axioms:
        try:
            steps = ground_trace(axiom.formula, interp)
        except GosilError as err:
            out.write(_diagnostic(args.theory, err, axiom.loc) + "\n")
            status = 1
            continue
        if args.trace:
            for step, formula in steps:
                out.write(f"{axiom.label}: {step}: {ast.format_formula(formula)}\n")
        else:
            out.write(f"{axiom.label}: {ast.format_formula(steps[-1][1])}\n")
    return status


def cmd_eval(args, out) -> int:
    theory = _load_theory(args.theory)
    structure = parse_structure(_read(args.structure), theory.vocabulary, args.nat_bound)
    status = 0
    records = []
    for axiom in theory.axioms:
        record: dict = {"label": axiom.label}
        try:
            check_sentence(theory, axiom.formula)
            value = bool(evaluate(structure, axiom.formula))
        except GosilError as err:
            out.write(f"{axiom.label}: error\n")
            out.write(_diagnostic(args.theory, err, axiom.loc) + "\n")
            record["verdict"] = "error"
            record["error"] = {"kind": err.kind, "message": err.message}
            records.append(record)
            status = 1
            continue
        out.write(f"{axiom.label}: {'true' if value else 'false'}\n")
        record["verdict"] = "true" if value else "false"
        record["error"] = None
        records.append(record)
        if not value:
            status = 1
    if args.json:
        out.write(json.dumps({"command": "eval", "axioms": records}, sort_keys=True) + "\n")
    return status


def _parse_bounds(pairs: list[str]) -> dict[str, int]:
    bounds: dict[str, int] = {}
    for pair in pairs:
        name, _, size = pair.partition("=")
        if not name or not size or not size.isdigit():
            raise ParseError(f"bad --bound {pair!r}; expected TYPE=N")
        bounds[name] = int(size)
    return bounds


def cmd_models(args, out) -> int:
    theory = _load_theory(args.theory)
    bounds = _parse_bounds(args.bound or [])
    found = find_models(
        theory,
        bounds,
        limit=args.limit,
        nat_bound=args.nat_bound,
        explosion_cap=args.cap,
    )
    for i, structure in enumerate(found, start=1):
        out.write(f"// model {i}\n")
        out.write(format_structure(structure))
    out.write(f"// {len(found)} model(s)\n")
    return 0 if found else 1


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gosil",
        description="Check, elaborate, ground, and evaluate guarded "
        "order-sorted intensional theories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="type-check every axiom")
    check.add_argument("theory")
    check.add_argument("--derivation", action="store_true", help="print derivation trees")
    check.add_argument("--trace", action="store_true", help="print grounding steps")
    check.add_argument("--json", action="store_true", help="machine-readable verdicts")
    check.set_defaults(run=cmd_check)

    elab = sub.add_parser("elaborate", help="expand implicit guards")
    elab.add_argument("theory")
    elab.set_defaults(run=cmd_elaborate)

    grnd = sub.add_parser("ground", help="eliminate intensional constructs")
    grnd.add_argument("theory")
    grnd.add_argument("--trace", action="store_true", help="print grounding steps")
    grnd.set_defaults(run=cmd_ground)

    evl = sub.add_parser("eval", help="evaluate axioms against a structure")
    evl.add_argument("theory")
    evl.add_argument("--structure", required=True)
    evl.add_argument("--nat-bound", type=int, default=None)
    evl.add_argument("--json", action="store_true")
    evl.set_defaults(run=cmd_eval)

    models = sub.add_parser("models", help="enumerate satisfying structures")
    models.add_argument("theory")
    models.add_argument("--bound", action="append", metavar="TYPE=N")
    models.add_argument("--limit", type=int, default=None)
    models.add_argument("--nat-bound", type=int, default=None)
    models.add_argument("--cap", type=int, default=10_000_000)
    models.set_defaults(run=cmd_models)

    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args, out)
    except FileNotFoundError as err:
        out.write(f"error: {err}\n")
        return 2
    except (ParseError, StructureError) as err:
        out.write(_diagnostic(args.theory, err) + "\n")
        return 2
    except GosilError as err:
        out.write(_diagnostic(args.theory, err) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
