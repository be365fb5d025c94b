"""Expansion of implicit guard wrappers into explicit guard prefixes.

<<c: body>> becomes S1(t1) & ... & Sn(tn) & body and <<i: body>> becomes
S1(t1) & ... & Sn(tn) => body, where the (t_i, S_i) are the argument
occurrences inside the body whose expected type S_i lies strictly below the
term's principal type. Wrappers elaborate innermost-first; with no targets a
wrapper simply disappears.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ast
from .errors import IncomparableTypes
from .typecheck import TypingContext, VarEntry, derive_term
from .vocabulary import is_subtype


@dataclass(frozen=True)
class GuardTarget:
    """One guard to emit: `term` occurs where `expected_type` is required
    but only has the strictly larger `principal_type`."""

    term: ast.Term
    expected_type: str
    principal_type: str
    occurrence: tuple[int, ...]


def guard_targets(ctx: TypingContext, body: ast.Formula) -> list[GuardTarget]:
    """Collect guard targets in preorder, first occurrence first, one target
    per distinct (term, expected type) pair.

    Occurrences mentioning a variable bound inside the body are skipped: a
    guard emitted outside the wrapper could not reference them. Argument
    types unrelated to the expected type are an error here, where the
    diagnostic can still point at the wrapper."""
    targets: list[GuardTarget] = []
    seen: set[tuple[ast.Term, str]] = set()

    def consider(
        scope: TypingContext,
        bound: frozenset[str],
        term: ast.Term,
        expected: str,
        path: tuple[int, ...],
    ) -> None:
        if not ast.term_variables(term).isdisjoint(bound):
            return
        principal = derive_term(scope, term, path).type_name
        if principal == expected or is_subtype(scope.vocab, principal, expected):
            return
        if not is_subtype(scope.vocab, expected, principal):
            raise IncomparableTypes(
                f"argument {ast.format_term(term)} has type {principal}, "
                f"unrelated to expected {expected}"
            )
        if (term, expected) in seen:
            return
        seen.add((term, expected))
        targets.append(GuardTarget(term, expected, principal, path))

    def scan_term(
        scope: TypingContext, bound: frozenset[str], t: ast.Term, path: tuple[int, ...]
    ) -> None:
        match t:
            case ast.Apply(symbol, args):
                sig = scope.lookup_symbol(symbol)
                expected_types = sig.argument_types if sig is not None else ()
                for i, (arg, expected) in enumerate(zip(args, expected_types)):
                    consider(scope, bound, arg, expected, path + (i,))
                    scan_term(scope, bound, arg, path + (i,))
            case ast.Deref(head, args):
                scan_term(scope, bound, head, path + (0,))
                for i, arg in enumerate(args):
                    scan_term(scope, bound, arg, path + (i + 1,))
            case _:
                pass

    def scan(
        scope: TypingContext, bound: frozenset[str], f: ast.Formula, path: tuple[int, ...]
    ) -> None:
        match f:
            case ast.Truth():
                pass
            case ast.Atom(ast.EQUALITY_ATOM, args):
                # equality checks both sides at a common supertype, which
                # always exists; nothing to guard
                for i, arg in enumerate(args):
                    scan_term(scope, bound, arg, path + (i,))
            case ast.Atom(predicate, args):
                sig = scope.lookup_symbol(predicate)
                expected_types = sig.argument_types if sig is not None else ()
                for i, (arg, expected) in enumerate(zip(args, expected_types)):
                    consider(scope, bound, arg, expected, path + (i,))
                    scan_term(scope, bound, arg, path + (i,))
            case ast.DerefAtom(head, args):
                scan_term(scope, bound, head, path + (0,))
                for i, arg in enumerate(args):
                    scan_term(scope, bound, arg, path + (i + 1,))
            case ast.Not(body_) | ast.GuardC(body_) | ast.GuardI(body_):
                scan(scope, bound, body_, path + (0,))
            case ast.And(l, r) | ast.Or(l, r) | ast.Implies(l, r) | ast.Iff(l, r):
                scan(scope, bound, l, path + (0,))
                scan(scope, bound, r, path + (1,))
            case ast.Exists(var, type_name, body_) | ast.Forall(var, type_name, body_):
                scan(scope.push(VarEntry(var, type_name)), bound | {var}, body_, path + (0,))
            case _:
                raise TypeError(f"not a formula: {f!r}")

    scan(ctx, frozenset(), body, ())
    return targets


def _guard_atom(target: GuardTarget) -> ast.Atom:
    return ast.Atom(target.expected_type, (target.term,))


def _conjoin(formulas: list[ast.Formula]) -> ast.Formula:
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = ast.And(f, result)
    return result


def elaborate(ctx: TypingContext, formula: ast.Formula) -> ast.Formula:
    """Rewrite away every guard wrapper, innermost first. The output is
    wrapper-free; wrapper-free input comes back unchanged."""
    match formula:
        case ast.Truth() | ast.Atom() | ast.DerefAtom():
            return formula
        case ast.Not(body):
            return ast.Not(elaborate(ctx, body))
        case ast.And(l, r):
            return ast.And(elaborate(ctx, l), elaborate(ctx, r))
        case ast.Or(l, r):
            return ast.Or(elaborate(ctx, l), elaborate(ctx, r))
        case ast.Implies(l, r):
            return ast.Implies(elaborate(ctx, l), elaborate(ctx, r))
        case ast.Iff(l, r):
            return ast.Iff(elaborate(ctx, l), elaborate(ctx, r))
        case ast.Exists(var, type_name, body):
            return ast.Exists(var, type_name, elaborate(ctx.push(VarEntry(var, type_name)), body))
        case ast.Forall(var, type_name, body):
            return ast.Forall(var, type_name, elaborate(ctx.push(VarEntry(var, type_name)), body))
        case ast.GuardC(body):
            inner = elaborate(ctx, body)
            targets = guard_targets(ctx, inner)
            if not targets:
                return inner
            return _conjoin([_guard_atom(t) for t in targets] + [inner])
        case ast.GuardI(body):
            inner = elaborate(ctx, body)
            targets = guard_targets(ctx, inner)
            if not targets:
                return inner
            antecedent = _conjoin([_guard_atom(t) for t in targets])
            return ast.Implies(antecedent, inner)
    raise TypeError(f"not a formula: {formula!r}")
