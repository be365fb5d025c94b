"""Grounding: eliminate concept quantifiers, references, and dereferences.

Quantifiers over concept types expand to disjunctions/conjunctions over the
type's fixed extension, outermost first; dereference heads reduce to concept
objects (via the concept-function facts where needed) and apply the named
symbol; any implicit guard wrappers are then elaborated per grounded
instance. Quantifiers over ordinary types stay put: grounding exists to
remove the intensional constructs, not to propositionalize the theory.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import ast, elaboration
from .errors import (
    GroundArityError,
    MissingExtension,
    NonFunctionalFacts,
    NonTotalConceptFunction,
    UnknownConceptMember,
    UnresolvableDeref,
)
from .typecheck import VarEntry, initial_context
from .vocabulary import (
    CONCEPT,
    ConceptObject,
    Vocabulary,
    concept_universe,
    deref_signature,
    is_subtype,
    resolve_concept,
)

FactKey = tuple[str, tuple[ConceptObject, ...]]


@dataclass(frozen=True)
class GroundInterpretation:
    """The fixed intensional part of a theory: extensions of concept types
    and the graphs of concept-valued functions."""

    vocab: Vocabulary
    extensions: dict[str, tuple[ConceptObject, ...]] = field(default_factory=dict)
    facts: dict[FactKey, ConceptObject] = field(default_factory=dict)

    def extension(self, type_name: str) -> tuple[ConceptObject, ...]:
        if type_name in self.extensions:
            return self.extensions[type_name]
        if type_name == CONCEPT:
            return concept_universe(self.vocab)
        raise MissingExtension(f"concept type {type_name!r} has no declared extension")


def is_intensional(vocab: Vocabulary, formula: ast.Formula) -> bool:
    """True when grounding has work to do: the formula mentions concept
    references/dereferences or quantifies over a concept type."""
    if ast.has_intensional_nodes(formula):
        return True

    def quantifies_concepts(f: ast.Formula) -> bool:
        match f:
            case ast.Exists(_, type_name, body) | ast.Forall(_, type_name, body):
                if is_subtype(vocab, type_name, CONCEPT):
                    return True
                return quantifies_concepts(body)
            case ast.Not(body) | ast.GuardC(body) | ast.GuardI(body):
                return quantifies_concepts(body)
            case ast.And(l, r) | ast.Or(l, r) | ast.Implies(l, r) | ast.Iff(l, r):
                return quantifies_concepts(l) or quantifies_concepts(r)
            case _:
                return False

    return quantifies_concepts(formula)


def build_intensional_interp(theory: ast.Theory) -> GroundInterpretation:
    """Collect extensions and concept-function facts from a theory, checking
    that facts are functional and total over their declared domains."""
    vocab = theory.vocabulary
    extensions: dict[str, tuple[ConceptObject, ...]] = {}
    for ext in vocab.extensions:
        members = []
        for name in ext.members:
            concept = resolve_concept(vocab, name)
            if concept is None:
                raise UnknownConceptMember(
                    f"extension of {ext.type_name!r} names undeclared {name!r}"
                )
            members.append(concept)
        extensions[ext.type_name] = tuple(members)

    facts: dict[FactKey, ConceptObject] = {}
    for fact in theory.concept_facts:
        key = (fact.function, fact.args)
        if key in facts and facts[key] != fact.value:
            args = ", ".join(str(a) for a in fact.args)
            raise NonFunctionalFacts(
                f"{fact.function}({args}) defined as both "
                f"{facts[key]} and {fact.value}",
                fact.loc,
            )
        facts[key] = fact.value

    interp = GroundInterpretation(vocab, extensions, facts)
    _check_totality(interp)
    return interp


def _check_totality(interp: GroundInterpretation) -> None:
    """Every concept-valued function whose argument types all have known
    extensions must have a fact for each argument tuple."""
    vocab = interp.vocab
    for sig in vocab.signatures:
        if sig.builtin or not is_subtype(vocab, sig.result_type, CONCEPT):
            continue
        domains = []
        enumerable = True
        for arg_type in sig.argument_types:
            if arg_type in interp.extensions:
                domains.append(interp.extensions[arg_type])
            elif arg_type == CONCEPT:
                domains.append(concept_universe(vocab))
            else:
                enumerable = False
                break
        if not enumerable:
            continue
        for combo in itertools.product(*domains):
            if (sig.name, combo) not in interp.facts:
                args = ", ".join(str(c) for c in combo)
                raise NonTotalConceptFunction(
                    f"no value defined for {sig.name}({args})"
                )


# -- the grounding passes ---------------------------------------------------------


def _expand_quantifiers(interp: GroundInterpretation, f: ast.Formula) -> ast.Formula:
    """Pass 1: replace concept-typed quantifiers by finite expansions over
    their extensions, substituting concept references for the variable.
    Outer quantifiers expand before the instances are recursed into."""
    vocab = interp.vocab

    def fold(instances: list[ast.Formula], empty: ast.Formula, node) -> ast.Formula:
        if not instances:
            return empty
        result = instances[-1]
        for inst in reversed(instances[:-1]):
            result = node(inst, result)
        return result

    match f:
        case ast.Exists(var, type_name, body) | ast.Forall(var, type_name, body):
            if is_subtype(vocab, type_name, CONCEPT):
                instances = [
                    _expand_quantifiers(
                        interp, ast.substitute(body, var, ast.ConceptRef(obj))
                    )
                    for obj in interp.extension(type_name)
                ]
                if isinstance(f, ast.Exists):
                    return fold(instances, ast.Truth(False), ast.Or)
                return fold(instances, ast.Truth(True), ast.And)
            rebuilt = _expand_quantifiers(interp, body)
            return type(f)(var, type_name, rebuilt)
        case ast.Not(body):
            return ast.Not(_expand_quantifiers(interp, body))
        case ast.GuardC(body):
            return ast.GuardC(_expand_quantifiers(interp, body))
        case ast.GuardI(body):
            return ast.GuardI(_expand_quantifiers(interp, body))
        case ast.And(l, r) | ast.Or(l, r) | ast.Implies(l, r) | ast.Iff(l, r):
            return type(f)(_expand_quantifiers(interp, l), _expand_quantifiers(interp, r))
        case _:
            return f


def _reduce_head(interp: GroundInterpretation, term: ast.Term) -> ConceptObject:
    """Reduce a dereference head to the concept object it denotes."""
    match term:
        case ast.ConceptRef(concept):
            return concept
        case ast.Apply(symbol, args):
            sig = interp.vocab.signature(symbol)
            if sig is not None and is_subtype(interp.vocab, sig.result_type, CONCEPT):
                reduced = tuple(_reduce_head(interp, a) for a in args)
                value = interp.facts.get((symbol, reduced))
                if value is None:
                    shown = ", ".join(str(c) for c in reduced)
                    raise UnresolvableDeref(
                        f"no fact determines {symbol}({shown})", term.loc
                    )
                return value
    raise UnresolvableDeref(
        f"dereference head {ast.format_term(term)} does not reduce to a concept",
        getattr(term, "loc", None),
    )


def _eliminate(interp: GroundInterpretation, node):
    """Pass 2: rewrite dereferences to direct applications of the symbols
    their heads denote (the type predicate, for a type's concept)."""
    vocab = interp.vocab

    def term(t: ast.Term) -> ast.Term:
        match t:
            case ast.Apply(symbol, args):
                return ast.Apply(symbol, tuple(term(a) for a in args))
            case ast.Deref(head, args):
                return _apply_concept(head, args, ast.Apply)
            case _:
                return t

    def _apply_concept(head: ast.Term, args: tuple[ast.Term, ...], build):
        obj = _reduce_head(interp, term(head))
        sig = deref_signature(vocab, obj)
        if sig is None:
            raise UnresolvableDeref(f"concept {obj} names nothing applicable")
        new_args = tuple(term(a) for a in args)
        if len(new_args) != sig.arity:
            raise GroundArityError(
                f"{obj} dereferences to {sig.name!r} expecting {sig.arity} "
                f"argument(s), got {len(new_args)}"
            )
        return build(sig.name, new_args)

    def formula(f: ast.Formula) -> ast.Formula:
        match f:
            case ast.Truth():
                return f
            case ast.Atom(p, args):
                return ast.Atom(p, tuple(term(a) for a in args))
            case ast.DerefAtom(head, args):
                return _apply_concept(head, args, ast.Atom)
            case ast.Not(body):
                return ast.Not(formula(body))
            case ast.GuardC(body):
                return ast.GuardC(formula(body))
            case ast.GuardI(body):
                return ast.GuardI(formula(body))
            case ast.And(l, r) | ast.Or(l, r) | ast.Implies(l, r) | ast.Iff(l, r):
                return type(f)(formula(l), formula(r))
            case ast.Exists(var, tn, body):
                return ast.Exists(var, tn, formula(body))
            case ast.Forall(var, tn, body):
                return ast.Forall(var, tn, formula(body))
        raise TypeError(f"not a formula: {f!r}")

    return term(node) if isinstance(node, ast.Term) else formula(node)


def ground_trace(
    formula: ast.Formula,
    interp: GroundInterpretation,
    free_var_types: dict[str, str] | None = None,
) -> list[tuple[str, ast.Formula]]:
    """The grounding pipeline with intermediate results, for tracing: the
    original formula, the quantifier expansion, the intensional elimination,
    and (when wrappers are present) the guard elaboration."""
    steps = [("original", formula)]
    expanded = _expand_quantifiers(interp, formula)
    if expanded != formula:
        steps.append(("grounded concept quantifiers", expanded))
    eliminated = _eliminate(interp, expanded)
    if eliminated != expanded:
        steps.append(("eliminated intensional terms", eliminated))
    if ast.has_guards(eliminated):
        ctx = initial_context(interp.vocab)
        if free_var_types:
            ctx = ctx.push(*(VarEntry(v, t) for v, t in free_var_types.items()))
        elaborated = elaboration.elaborate(ctx, eliminated)
        steps.append(("elaborated implicit guards", elaborated))
    return steps


def ground(
    formula: ast.Formula,
    interp: GroundInterpretation,
    free_var_types: dict[str, str] | None = None,
) -> ast.Formula:
    """Fully ground a formula: the output contains no concept-typed
    quantifier, no reference or dereference in applied position, and no
    guard wrapper. Formulas with none of those come back unchanged."""
    return ground_trace(formula, interp, free_var_types)[-1][1]


def grounded_size(
    formula: ast.Formula,
    interp: GroundInterpretation,
    free_var_types: dict[str, str] | None = None,
) -> int:
    """Number of atoms in the grounded formula."""
    return ast.atom_count(ground(formula, interp, free_var_types))
