"""Finite structures and the value of expressions in them.

A structure interprets every vocabulary symbol: each type gets a set of
domain elements and each symbol a total, functional graph. The forced parts
are synthesized rather than stored: Bool is the two truth values, Concept is
the concept universe, concept types with declared extensions get exactly
those, type predicates test membership, equality is identity, and Nat
arithmetic is computed (subtraction truncates at zero). Nat itself is
conceptually infinite; quantifying over it (or Universe) requires the
structure's nat_bound, which materializes 0..nat_bound.

Value clauses follow the inductive definition: connectives short-circuit in
evaluation order, existential quantification scans the type's elements in
their canonical order, a reference evaluates to its concept object, and a
dereference applies the symbol the head's concept names, rejecting argument
elements outside that symbol's declared argument types. Implicit guard
wrappers are evaluated by resolving the current concept-valued bindings and
expanding the wrapper for the resulting instance, mirroring what grounding
does instance by instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import ast, elaboration, grounding
from .errors import (
    EvaluationError,
    IllTypedSentence,
    ParseError,
    RuntimeDerefMismatch,
    StructureError,
    TypingError,
    UnassignedVariable,
    UnboundedNatQuantifier,
    ValidationReport,
)
from .parser import TokenStream, tokenize
from .typecheck import VarEntry, check_sentence, initial_context
from .vocabulary import (
    BOOL,
    CONCEPT,
    NAT,
    UNIVERSE,
    ConceptObject,
    Signature,
    Vocabulary,
    concept_universe,
    deref_signature,
    is_strict_subtype,
    is_subtype,
    resolve_concept,
)


# -- domain elements -------------------------------------------------------------


class DomainElement:
    def __str__(self) -> str:
        return self.identifier

    @property
    def identifier(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class PlainElement(DomainElement):
    token: str

    @property
    def identifier(self) -> str:
        return self.token


@dataclass(frozen=True)
class NaturalElement(DomainElement):
    value: int

    @property
    def identifier(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class TruthElement(DomainElement):
    value: bool

    @property
    def identifier(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class ConceptElement(DomainElement):
    concept: ConceptObject

    @property
    def identifier(self) -> str:
        return f"`{self.concept.name}"


TRUE = TruthElement(True)
FALSE = TruthElement(False)

Row = tuple[DomainElement, ...]
Assignment = dict[str, DomainElement]


@dataclass(frozen=True)
class FunctionGraph:
    """The graph of one symbol. Function graphs map every argument tuple to
    its result; predicate graphs store the true rows, all other tuples being
    false by completion."""

    name: str
    is_predicate: bool
    rows: tuple[tuple[Row, DomainElement], ...]

    def mapping(self) -> dict[Row, DomainElement]:
        return dict(self.rows)

    @staticmethod
    def for_function(name: str, mapping: dict[Row, DomainElement]) -> "FunctionGraph":
        return FunctionGraph(name, False, tuple(sorted(mapping.items(), key=_row_key)))

    @staticmethod
    def for_predicate(name: str, true_rows: set[Row]) -> "FunctionGraph":
        rows = tuple(sorted(((r, TRUE) for r in true_rows), key=_row_key))
        return FunctionGraph(name, True, rows)


def _row_key(item: tuple[Row, DomainElement]):
    args, result = item
    return tuple(e.identifier for e in args) + (result.identifier,)


@dataclass(frozen=True)
class Structure:
    """A complete finite interpretation: user-suppliable type sets and
    symbol graphs, with everything forced derived on demand."""

    vocab: Vocabulary
    type_sets: dict[str, tuple[DomainElement, ...]]
    graphs: dict[str, FunctionGraph]
    nat_bound: int | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def elements(self, type_name: str) -> tuple[DomainElement, ...]:
        """The enumerable elements of a type, in canonical order."""
        if type_name == BOOL:
            return (TRUE, FALSE)
        if type_name == CONCEPT:
            return tuple(ConceptElement(c) for c in concept_universe(self.vocab))
        if type_name == NAT:
            if self.nat_bound is None:
                raise UnboundedNatQuantifier(
                    "enumerating Nat requires a nat bound"
                )
            return tuple(NaturalElement(i) for i in range(self.nat_bound + 1))
        if type_name == UNIVERSE:
            out: list[DomainElement] = []
            for t in self.vocab.types:
                if t.builtin:
                    continue
                for e in self.type_sets.get(t.name, ()):
                    if e not in out:
                        out.append(e)
            out.extend(self.elements(BOOL))
            out.extend(self.elements(NAT))
            out.extend(self.elements(CONCEPT))
            return tuple(out)
        return self.type_sets.get(type_name, ())

    def member(self, element: DomainElement, type_name: str) -> bool:
        """Membership test; unlike elements(), total even for Nat."""
        if type_name == UNIVERSE:
            return True
        if type_name == BOOL:
            return isinstance(element, TruthElement)
        if type_name == NAT:
            return isinstance(element, NaturalElement)
        if type_name == CONCEPT:
            return isinstance(element, ConceptElement)
        return element in self.type_sets.get(type_name, ())

    def graph(self, name: str) -> FunctionGraph | None:
        return self.graphs.get(name)

    def mentioned_naturals(self) -> tuple[int, ...]:
        values = {0}
        if self.nat_bound is not None:
            values.update(range(self.nat_bound + 1))
        for elems in self.type_sets.values():
            values.update(e.value for e in elems if isinstance(e, NaturalElement))
        for g in self.graphs.values():
            for args, result in g.rows:
                for e in args + (result,):
                    if isinstance(e, NaturalElement):
                        values.add(e.value)
        return tuple(sorted(values))


def _forced_type_sets(vocab: Vocabulary) -> dict[str, tuple[DomainElement, ...]]:
    """Concept subtypes with declared extensions are fixed by them."""
    forced: dict[str, tuple[DomainElement, ...]] = {}
    for ext in vocab.extensions:
        members = tuple(
            ConceptElement(resolve_concept(vocab, m)) for m in ext.members
        )
        forced[ext.type_name] = members
    return forced


def assemble_structure(
    vocab: Vocabulary,
    type_sets: dict[str, tuple[DomainElement, ...]],
    graphs: dict[str, FunctionGraph],
    nat_bound: int | None = None,
) -> tuple[Structure, ValidationReport]:
    """Fill in the forced interpretations and validate. User-supplied parts
    that conflict with forced ones are violations, as are missing or broken
    graphs."""
    report = ValidationReport()
    # user-supplied sets are canonicalized by identifier; forced concept
    # sets keep their declared extension order (grounding expands in it)
    merged = {
        name: tuple(sorted(elems, key=lambda e: e.identifier))
        for name, elems in type_sets.items()
    }
    for name, forced in _forced_type_sets(vocab).items():
        supplied = type_sets.get(name)
        if supplied is not None and tuple(supplied) != forced:
            report.add(
                "ForcedInterpretation",
                f"type {name!r} is fixed by its declared extension",
                name,
            )
        merged[name] = forced
    for name in list(merged):
        if name in (BOOL, NAT, CONCEPT, UNIVERSE):
            report.add("ForcedInterpretation", f"type {name!r} is built in", name)
            del merged[name]
        elif not vocab.has_type(name):
            report.add("UnknownType", f"structure interprets unknown type {name!r}", name)
            del merged[name]

    completed_graphs = dict(graphs)
    for sig in vocab.signatures:
        if sig.builtin:
            continue
        if sig.name not in completed_graphs:
            if sig.is_predicate:
                completed_graphs[sig.name] = FunctionGraph.for_predicate(sig.name, set())
            else:
                report.add(
                    "MissingInterpretation",
                    f"no interpretation for function {sig.name!r}",
                    sig.name,
                )
    for name in graphs:
        sig = vocab.signature(name)
        if sig is None or sig.builtin or vocab.has_type(name):
            report.add(
                "ForcedInterpretation",
                f"{name!r} is not a user symbol open to interpretation",
                name,
            )
            completed_graphs.pop(name, None)

    structure = Structure(vocab, merged, completed_graphs, nat_bound)
    _check_structure(structure, report)
    return structure, report


def validate_structure(vocab: Vocabulary, structure: Structure) -> ValidationReport:
    """Re-check all structure invariants for an assembled structure."""
    report = ValidationReport()
    _check_structure(structure, report)
    return report


def _check_structure(structure: Structure, report: ValidationReport) -> None:
    vocab = structure.vocab
    for t in vocab.types:
        if t.builtin:
            continue
        elems = structure.type_sets.get(t.name, ())
        if not elems:
            report.add("EmptyType", f"type {t.name!r} has no elements", t.name)
        if len(set(elems)) != len(elems):
            report.add("DuplicateElement", f"type {t.name!r} repeats an element", t.name)
        for sub, sup in vocab.direct_edges:
            if sub != t.name:
                continue
            for e in elems:
                if not structure.member(e, sup):
                    report.add(
                        "SubtypeContainment",
                        f"element {e} of {sub!r} is missing from supertype {sup!r}",
                        sub,
                    )
    for name, graph in structure.graphs.items():
        sig = vocab.signature(name)
        if sig is None:
            report.add("UnknownSymbol", f"graph for undeclared symbol {name!r}", name)
            continue
        seen: dict[Row, DomainElement] = {}
        for args, result in graph.rows:
            if len(args) != sig.arity:
                report.add("ArityMismatch", f"row of {name!r} has wrong arity", name)
                continue
            for e, arg_type in zip(args, sig.argument_types):
                if not _element_in_type(structure, e, arg_type):
                    report.add(
                        "RowTyping",
                        f"argument {e} of {name!r} is not in {arg_type!r}",
                        name,
                    )
            if not graph.is_predicate and not _element_in_type(structure, result, sig.result_type):
                report.add(
                    "RowTyping",
                    f"result {result} of {name!r} is not in {sig.result_type!r}",
                    name,
                )
            if args in seen and seen[args] != result:
                report.add("Functionality", f"{name!r} maps a tuple to two results", name)
            seen[args] = result
        if not graph.is_predicate:
            for combo in _argument_tuples(structure, sig):
                if combo not in seen:
                    shown = ", ".join(str(e) for e in combo)
                    report.add(
                        "Totality", f"{name!r} has no value at ({shown})", name
                    )


def _element_in_type(structure: Structure, element: DomainElement, type_name: str) -> bool:
    return structure.member(element, type_name)


def _argument_tuples(structure: Structure, sig: Signature):
    """The argument product a total function must cover; Nat positions use
    the materialized naturals (mentioned values plus 0..nat_bound)."""
    domains = []
    for arg_type in sig.argument_types:
        if arg_type == NAT:
            domains.append(tuple(NaturalElement(v) for v in structure.mentioned_naturals()))
        elif arg_type == UNIVERSE:
            domains.append(structure.elements(UNIVERSE) if structure.nat_bound is not None else ())
        else:
            domains.append(structure.elements(arg_type))
    return itertools.product(*domains)


# -- evaluation ------------------------------------------------------------------------


def _apply(
    structure: Structure,
    sig: Signature,
    elements: Row,
    via_deref: bool,
) -> DomainElement:
    """Apply a symbol's graph to evaluated arguments. Elements outside the
    declared argument types have no defined value."""
    if len(elements) != sig.arity:
        raise RuntimeDerefMismatch(
            f"{sig.name!r} expects {sig.arity} argument(s), got {len(elements)}"
        )
    for e, arg_type in zip(elements, sig.argument_types):
        if not structure.member(e, arg_type):
            message = f"{sig.name!r} is undefined at {e} (not in {arg_type!r})"
            if via_deref:
                raise RuntimeDerefMismatch(message)
            raise EvaluationError(message)
    if sig.builtin:
        return _apply_builtin(structure, sig, elements)
    graph = structure.graph(sig.name)
    if graph is None:
        raise EvaluationError(f"no interpretation for symbol {sig.name!r}")
    mapping = graph.mapping()
    if graph.is_predicate:
        return TRUE if elements in mapping else FALSE
    if elements not in mapping:
        shown = ", ".join(str(e) for e in elements)
        raise EvaluationError(f"{sig.name!r} has no value at ({shown})")
    return mapping[elements]


def _apply_builtin(structure: Structure, sig: Signature, elements: Row) -> DomainElement:
    if sig.name in ("+", "-", "*"):
        a, b = elements
        assert isinstance(a, NaturalElement) and isinstance(b, NaturalElement)
        if sig.name == "+":
            return NaturalElement(a.value + b.value)
        if sig.name == "*":
            return NaturalElement(a.value * b.value)
        return NaturalElement(max(0, a.value - b.value))  # truncated at zero
    if sig.name.startswith("=_"):
        return TRUE if elements[0] == elements[1] else FALSE
    if structure.vocab.has_type(sig.name):  # type predicate
        return TRUE if structure.member(elements[0], sig.name) else FALSE
    raise EvaluationError(f"unknown built-in {sig.name!r}")


def _resolve_symbol(vocab: Vocabulary, name: str) -> Signature | None:
    sig = vocab.signature(name)
    if sig is not None:
        return sig
    if name.startswith("=_") and vocab.has_type(name[2:]):
        from .vocabulary import equality_signature

        return equality_signature(name[2:])
    return None


def evaluate(
    structure: Structure,
    expr: ast.Term | ast.Formula,
    assignment: Assignment | None = None,
    var_types: dict[str, str] | None = None,
):
    """The value of an expression: a DomainElement for terms, a bool for
    formulas. `var_types` gives the declared types of the free variables,
    needed when implicit guard wrappers must be expanded on the fly."""
    asg = dict(assignment or {})
    types = dict(var_types or {})
    if isinstance(expr, ast.Term):
        return _eval_term(structure, expr, asg)
    return _eval_formula(structure, expr, asg, types)


def _eval_term(structure: Structure, term: ast.Term, asg: Assignment) -> DomainElement:
    match term:
        case ast.Variable(name):
            if name not in asg:
                raise UnassignedVariable(f"variable {name!r} has no assigned value")
            return asg[name]
        case ast.NatLiteral(value):
            return NaturalElement(value)
        case ast.ConceptRef(concept):
            return ConceptElement(concept)
        case ast.Apply(symbol, args):
            sig = _resolve_symbol(structure.vocab, symbol)
            if sig is None:
                raise EvaluationError(f"unknown symbol {symbol!r}")
            elements = tuple(_eval_term(structure, a, asg) for a in args)
            return _apply(structure, sig, elements, via_deref=False)
        case ast.Deref(head, args):
            return _eval_deref(structure, head, args, asg)
    raise TypeError(f"not a term: {term!r}")


def _eval_deref(
    structure: Structure, head: ast.Term, args: tuple[ast.Term, ...], asg: Assignment
) -> DomainElement:
    head_value = _eval_term(structure, head, asg)
    if not isinstance(head_value, ConceptElement):
        raise RuntimeDerefMismatch(
            f"dereference head evaluated to {head_value}, not a concept"
        )
    sig = deref_signature(structure.vocab, head_value.concept)
    if sig is None:
        raise RuntimeDerefMismatch(f"concept {head_value.concept} names nothing applicable")
    elements = tuple(_eval_term(structure, a, asg) for a in args)
    return _apply(structure, sig, elements, via_deref=True)


def _as_truth(value: DomainElement, what: str) -> bool:
    if not isinstance(value, TruthElement):
        raise EvaluationError(f"{what} evaluated to {value}, not a truth value")
    return value.value


def _eval_formula(
    structure: Structure, f: ast.Formula, asg: Assignment, types: dict[str, str]
) -> bool:
    match f:
        case ast.Truth(value):
            return value
        case ast.Atom(ast.EQUALITY_ATOM, (l, r)):
            return _eval_term(structure, l, asg) == _eval_term(structure, r, asg)
        case ast.Atom(predicate, args):
            sig = _resolve_symbol(structure.vocab, predicate)
            if sig is None:
                raise EvaluationError(f"unknown symbol {predicate!r}")
            elements = tuple(_eval_term(structure, a, asg) for a in args)
            return _as_truth(
                _apply(structure, sig, elements, via_deref=False), predicate
            )
        case ast.DerefAtom(head, args):
            return _as_truth(
                _eval_deref(structure, head, args, asg), "dereference"
            )
        case ast.Not(body):
            return not _eval_formula(structure, body, asg, types)
        case ast.And(l, r):
            return _eval_formula(structure, l, asg, types) and _eval_formula(
                structure, r, asg, types
            )
        case ast.Or(l, r):
            return _eval_formula(structure, l, asg, types) or _eval_formula(
                structure, r, asg, types
            )
        case ast.Implies(l, r):
            return (not _eval_formula(structure, l, asg, types)) or _eval_formula(
                structure, r, asg, types
            )
        case ast.Iff(l, r):
            return _eval_formula(structure, l, asg, types) == _eval_formula(
                structure, r, asg, types
            )
        case ast.Exists(var, type_name, body):
            for d in structure.elements(type_name):
                if _eval_formula(
                    structure, body, {**asg, var: d}, {**types, var: type_name}
                ):
                    return True
            return False
        case ast.Forall(var, type_name, body):
            for d in structure.elements(type_name):
                if not _eval_formula(
                    structure, body, {**asg, var: d}, {**types, var: type_name}
                ):
                    return False
            return True
        case ast.GuardC() | ast.GuardI():
            return _eval_guard(structure, f, asg, types)
    raise TypeError(f"not a formula: {f!r}")


def _eval_guard(
    structure: Structure, wrapper: ast.Formula, asg: Assignment, types: dict[str, str]
) -> bool:
    """Evaluate an implicit guard wrapper under the current bindings: fix the
    concept-valued variables, resolve the dereferences they unlock, expand
    the wrapper for that instance, and evaluate the result."""
    body = wrapper.body
    remaining_types = dict(types)
    for var in sorted(ast.free_variables(body)):
        element = asg.get(var)
        if isinstance(element, ConceptElement):
            body = ast.substitute(body, var, ast.ConceptRef(element.concept))
            remaining_types.pop(var, None)
    interp = interpretation_of(structure)
    body = grounding._eliminate(interp, body)
    rewrapped = type(wrapper)(body)
    ctx = initial_context(structure.vocab).push(
        *(VarEntry(v, t) for v, t in remaining_types.items())
    )
    expanded = elaboration.elaborate(ctx, rewrapped)
    return _eval_formula(structure, expanded, asg, remaining_types)


# -- satisfaction ----------------------------------------------------------------------


def interpretation_of(structure: Structure) -> grounding.GroundInterpretation:
    """The intensional interpretation a structure induces: its concept-type
    extensions plus the graphs of its concept-valued functions as facts."""
    cached = structure._cache.get("interp")
    if cached is not None:
        return cached
    vocab = structure.vocab
    extensions: dict[str, tuple[ConceptObject, ...]] = {}
    for t in vocab.types:
        if t.builtin or not is_strict_subtype(vocab, t.name, CONCEPT):
            continue
        elems = structure.type_sets.get(t.name, ())
        extensions[t.name] = tuple(
            e.concept for e in elems if isinstance(e, ConceptElement)
        )
    facts: dict[grounding.FactKey, ConceptObject] = {}
    for name, graph in structure.graphs.items():
        sig = vocab.signature(name)
        if sig is None or not is_subtype(vocab, sig.result_type, CONCEPT):
            continue
        for args, result in graph.rows:
            if isinstance(result, ConceptElement) and all(
                isinstance(a, ConceptElement) for a in args
            ):
                facts[(name, tuple(a.concept for a in args))] = result.concept
    interp = grounding.GroundInterpretation(vocab, extensions, facts)
    structure._cache["interp"] = interp
    return interp


def _theory_of(structure: Structure) -> ast.Theory:
    interp = interpretation_of(structure)
    facts = tuple(
        ast.ConceptFact(name, args, value)
        for (name, args), value in sorted(
            interp.facts.items(), key=lambda kv: (kv[0][0], [c.name for c in kv[0][1]])
        )
    )
    return ast.Theory(structure.vocab, (), facts)


def satisfies(structure: Structure, sentence: ast.Formula) -> bool:
    """S satisfies a sentence iff its value is true. Ill-typed sentences are
    rejected rather than given one of their competing readings."""
    try:
        check_sentence(_theory_of(structure), sentence)
    except TypingError as err:
        raise IllTypedSentence(f"sentence is ill-typed: {err.message}") from err
    return bool(evaluate(structure, sentence))


# -- structure files ----------------------------------------------------------------------


def parse_structure(text: str, vocab: Vocabulary, nat_bound: int | None = None) -> Structure:
    """Parse the textual structure format:

        type Animal = { t, d }
        interp age = { (t) -> 3, (d) -> 5 }
        interp meow = { t }            // predicate: listed rows are true

    Omitted forced interpretations are synthesized; violations raise."""
    stream = TokenStream(tokenize(text))
    type_sets: dict[str, tuple[DomainElement, ...]] = {}
    functions: dict[str, FunctionGraph] = {}

    def element() -> DomainElement:
        tok = stream.peek()
        if tok.kind == "nat":
            stream.next()
            return NaturalElement(int(tok.text))
        if tok.kind == "kw" and tok.text in ("true", "false"):
            stream.next()
            return TruthElement(tok.text == "true")
        if stream.accept_op("`"):
            name_tok = stream.expect_ident("concept name")
            name = name_tok.text
            if stream.accept_op("^"):
                name += "^"
            concept = resolve_concept(vocab, name)
            if concept is None:
                raise StructureError(f"unknown concept name {name!r}", name_tok.loc)
            return ConceptElement(concept)
        if tok.kind == "ident":
            stream.next()
            return PlainElement(tok.text)
        raise ParseError(f"expected a domain element, found {tok.text!r}", tok.loc)

    def row_args() -> Row:
        if stream.accept_op("("):
            if stream.accept_op(")"):
                return ()
            args = [element()]
            while stream.accept_op(","):
                args.append(element())
            stream.expect_op(")")
            return tuple(args)
        return (element(),)

    while True:
        stream.skip_newlines()
        tok = stream.peek()
        if tok.kind == "eof":
            break
        if tok.kind == "kw" and tok.text == "type":
            stream.next()
            name = stream.expect_ident("type name").text
            stream.expect_op("=")
            stream.expect_op("{")
            elems: list[DomainElement] = []
            if not stream.at_op("}"):
                elems.append(element())
                while stream.accept_op(","):
                    elems.append(element())
            stream.expect_op("}")
            type_sets[name] = tuple(elems)
        elif tok.kind == "ident" and tok.text == "interp":
            stream.next()
            name_tok = stream.expect_ident("symbol name")
            sig = vocab.signature(name_tok.text)
            if sig is None:
                raise StructureError(f"unknown symbol {name_tok.text!r}", name_tok.loc)
            if name_tok.text in functions:
                raise StructureError(
                    f"duplicate interpretation for {name_tok.text!r}", name_tok.loc
                )
            stream.expect_op("=")
            stream.expect_op("{")
            mapping: dict[Row, DomainElement] = {}
            true_rows: set[Row] = set()
            if not stream.at_op("}"):
                while True:
                    args = row_args()
                    if stream.accept_op("->"):
                        mapping[args] = element()
                    elif sig.is_predicate:
                        true_rows.add(args)
                    else:
                        raise ParseError(
                            "function rows need '-> result'", stream.peek().loc
                        )
                    if not stream.accept_op(","):
                        break
            stream.expect_op("}")
            if sig.is_predicate and not mapping:
                functions[name_tok.text] = FunctionGraph.for_predicate(
                    name_tok.text, true_rows
                )
            elif sig.is_predicate:
                raise ParseError(
                    f"predicate {name_tok.text!r} rows must not map to results",
                    name_tok.loc,
                )
            else:
                functions[name_tok.text] = FunctionGraph.for_function(
                    name_tok.text, mapping
                )
        else:
            raise ParseError(
                f"expected 'type' or 'interp', found {tok.text!r}", tok.loc
            )
        stream.expect_statement_end()

    structure, report = assemble_structure(vocab, type_sets, functions, nat_bound)
    if not report.ok:
        raise StructureError(f"invalid structure: {report.violations[0]}")
    return structure


def format_structure(structure: Structure) -> str:
    """Canonical structure text: user-suppliable blocks only, types first,
    everything sorted by identifier so outputs diff cleanly."""
    vocab = structure.vocab
    forced_types = set(_forced_type_sets(vocab))
    lines: list[str] = []
    for t in vocab.types:
        if t.builtin or t.name in forced_types:
            continue
        elems = sorted(structure.type_sets.get(t.name, ()), key=lambda e: e.identifier)
        lines.append(f"type {t.name} = {{ {', '.join(e.identifier for e in elems)} }}")
    for sig in vocab.signatures:
        if sig.builtin:
            continue
        graph = structure.graph(sig.name)
        if graph is None:
            continue
        if graph.is_predicate:
            rows = sorted(
                (f"({', '.join(e.identifier for e in args)})" for args, _ in graph.rows)
            )
        else:
            rows = sorted(
                f"({', '.join(e.identifier for e in args)}) -> {result.identifier}"
                for args, result in graph.rows
            )
        lines.append(f"interp {sig.name} = {{ {', '.join(rows)} }}")
    return "\n".join(lines) + "\n"
