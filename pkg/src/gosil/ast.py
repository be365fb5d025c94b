"""Abstract syntax for terms, formulas, and theories, plus the canonical
printer.

Terms and formulas are immutable dataclasses compared structurally; source
locations ride along without affecting equality, so parse(print(e)) == e
holds node for node. The printer emits the one canonical spelling of every
tree: minimal parentheses at the formula level (with & | => right-associative
and <=> left-associative) and fully parenthesized arithmetic at the term
level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import Location
from .vocabulary import ConceptObject, Vocabulary


class Term:
    def __str__(self) -> str:
        return format_term(self)


class Formula:
    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Variable(Term):
    name: str
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Apply(Term):
    symbol: str
    args: tuple[Term, ...] = ()
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class NatLiteral(Term):
    value: int
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ConceptRef(Term):
    """`name: the concept of a declared symbol or type, resolved at parse
    time to the object it denotes."""

    concept: ConceptObject
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Deref(Term):
    """$(head)(args): apply the symbol whose concept the head denotes."""

    head: Term
    args: tuple[Term, ...] = ()
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Truth(Formula):
    value: bool
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Atom(Formula):
    predicate: str
    args: tuple[Term, ...] = ()
    loc: Location | None = field(default=None, compare=False)


EQUALITY_ATOM = "="


@dataclass(frozen=True)
class DerefAtom(Formula):
    head: Term
    args: tuple[Term, ...] = ()
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Not(Formula):
    body: Formula
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    type_name: str
    body: Formula
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    type_name: str
    body: Formula
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class GuardC(Formula):
    """<<c: body>>: implicit conjunction guard."""

    body: Formula
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class GuardI(Formula):
    """<<i: body>>: implicit implication guard."""

    body: Formula
    loc: Location | None = field(default=None, compare=False)


# -- theories -------------------------------------------------------------------


@dataclass(frozen=True)
class Axiom:
    label: str
    formula: Formula
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ConceptFact:
    """A ground equation f(~a1, ..., ~an) = ~v fixing one value of a
    concept-valued function."""

    function: str
    args: tuple[ConceptObject, ...]
    value: ConceptObject
    loc: Location | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Theory:
    vocabulary: Vocabulary
    axioms: tuple[Axiom, ...] = ()
    concept_facts: tuple[ConceptFact, ...] = ()


# -- structural helpers -----------------------------------------------------------


def term_children(t: Term) -> tuple[Term, ...]:
    match t:
        case Apply(_, args):
            return args
        case Deref(head, args):
            return (head,) + args
        case _:
            return ()


def term_variables(t: Term) -> frozenset[str]:
    match t:
        case Variable(name):
            return frozenset((name,))
        case _:
            out: frozenset[str] = frozenset()
            for child in term_children(t):
                out |= term_variables(child)
            return out


def free_variables(expr: Term | Formula) -> frozenset[str]:
    """Free variables of an expression; quantifiers bind."""
    if isinstance(expr, Term):
        return term_variables(expr)
    match expr:
        case Truth():
            return frozenset()
        case Atom(_, args) | DerefAtom(_, args):
            out: frozenset[str] = frozenset()
            if isinstance(expr, DerefAtom):
                out |= term_variables(expr.head)
            for a in args:
                out |= term_variables(a)
            return out
        case Not(body) | GuardC(body) | GuardI(body):
            return free_variables(body)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            return free_variables(l) | free_variables(r)
        case Exists(var, _, body) | Forall(var, _, body):
            return free_variables(body) - {var}
    raise TypeError(f"not a formula: {expr!r}")


def substitute(expr, var: str, replacement: Term):
    """Replace free occurrences of `var` by a closed term."""

    def sub_term(t: Term) -> Term:
        match t:
            case Variable(name) if name == var:
                return replacement
            case Apply(symbol, args):
                return Apply(symbol, tuple(sub_term(a) for a in args))
            case Deref(head, args):
                return Deref(sub_term(head), tuple(sub_term(a) for a in args))
            case _:
                return t

    def sub_formula(f: Formula) -> Formula:
        match f:
            case Truth():
                return f
            case Atom(p, args):
                return Atom(p, tuple(sub_term(a) for a in args))
            case DerefAtom(head, args):
                return DerefAtom(sub_term(head), tuple(sub_term(a) for a in args))
            case Not(body):
                return Not(sub_formula(body))
            case And(l, r):
                return And(sub_formula(l), sub_formula(r))
            case Or(l, r):
                return Or(sub_formula(l), sub_formula(r))
            case Implies(l, r):
                return Implies(sub_formula(l), sub_formula(r))
            case Iff(l, r):
                return Iff(sub_formula(l), sub_formula(r))
            case Exists(v, tn, body):
                return f if v == var else Exists(v, tn, sub_formula(body))
            case Forall(v, tn, body):
                return f if v == var else Forall(v, tn, sub_formula(body))
            case GuardC(body):
                return GuardC(sub_formula(body))
            case GuardI(body):
                return GuardI(sub_formula(body))
        raise TypeError(f"not a formula: {f!r}")

    return sub_term(expr) if isinstance(expr, Term) else sub_formula(expr)


def has_intensional_nodes(expr: Term | Formula) -> bool:
    """True if the expression mentions a concept reference or dereference."""
    if isinstance(expr, (ConceptRef, Deref, DerefAtom)):
        return True
    if isinstance(expr, Term):
        return any(has_intensional_nodes(c) for c in term_children(expr))
    match expr:
        case Truth():
            return False
        case Atom(_, args):
            return any(has_intensional_nodes(a) for a in args)
        case Not(body) | GuardC(body) | GuardI(body) | Exists(_, _, body) | Forall(_, _, body):
            return has_intensional_nodes(body)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            return has_intensional_nodes(l) or has_intensional_nodes(r)
    raise TypeError(f"not a formula: {expr!r}")


def has_guards(f: Formula) -> bool:
    match f:
        case GuardC(_) | GuardI(_):
            return True
        case Truth() | Atom() | DerefAtom():
            return False
        case Not(body) | Exists(_, _, body) | Forall(_, _, body):
            return has_guards(body)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            return has_guards(l) or has_guards(r)
    raise TypeError(f"not a formula: {f!r}")


def atom_count(f: Formula) -> int:
    """Number of atomic formulas (Atom and DerefAtom nodes)."""
    match f:
        case Truth():
            return 0
        case Atom() | DerefAtom():
            return 1
        case Not(body) | GuardC(body) | GuardI(body) | Exists(_, _, body) | Forall(_, _, body):
            return atom_count(body)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            return atom_count(l) + atom_count(r)
    raise TypeError(f"not a formula: {f!r}")


def node_count(expr: Term | Formula) -> int:
    if isinstance(expr, Term):
        return 1 + sum(node_count(c) for c in term_children(expr))
    match expr:
        case Truth():
            return 1
        case Atom(_, args):
            return 1 + sum(node_count(a) for a in args)
        case DerefAtom(head, args):
            return 1 + node_count(head) + sum(node_count(a) for a in args)
        case Not(body) | GuardC(body) | GuardI(body) | Exists(_, _, body) | Forall(_, _, body):
            return 1 + node_count(body)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            return 1 + node_count(l) + node_count(r)
    raise TypeError(f"not a formula: {expr!r}")


def desugar(f: Formula) -> Formula:
    """Rewrite to the core connectives (true/false, atoms, ~, |, ?) using the
    standard shortcut definitions. Used to cross-check the native evaluation
    of &, =>, <=>, and ! against the core."""
    match f:
        case Truth() | Atom() | DerefAtom():
            return f
        case Not(body):
            return Not(desugar(body))
        case Or(l, r):
            return Or(desugar(l), desugar(r))
        case And(l, r):
            return Not(Or(Not(desugar(l)), Not(desugar(r))))
        case Implies(l, r):
            return Or(Not(desugar(l)), desugar(r))
        case Iff(l, r):
            dl, dr = desugar(l), desugar(r)
            return desugar(And(Or(Not(dl), dr), Or(Not(dr), dl)))
        case Exists(v, tn, body):
            return Exists(v, tn, desugar(body))
        case Forall(v, tn, body):
            return Not(Exists(v, tn, Not(desugar(body))))
    raise TypeError(f"cannot desugar {f!r}")


# -- canonical printing ------------------------------------------------------------

_LEVEL_QUANT = 0
_LEVEL_IFF = 1
_LEVEL_IMP = 2
_LEVEL_OR = 3
_LEVEL_AND = 4
_LEVEL_NOT = 5
_LEVEL_ATOM = 6

_ARITHMETIC_OPS = ("+", "-", "*")


def format_term(t: Term) -> str:
    match t:
        case Variable(name):
            return name
        case NatLiteral(value):
            return str(value)
        case ConceptRef(concept):
            return f"`{concept.name}"
        case Apply(symbol, (l, r)) if symbol in _ARITHMETIC_OPS:
            return f"({format_term(l)} {symbol} {format_term(r)})"
        case Apply(symbol, ()):
            return symbol
        case Apply(symbol, args):
            return f"{symbol}({', '.join(format_term(a) for a in args)})"
        case Deref(head, args):
            return f"$({format_term(head)})({', '.join(format_term(a) for a in args)})"
    raise TypeError(f"not a term: {t!r}")


def _level(f: Formula) -> int:
    match f:
        case Exists() | Forall():
            return _LEVEL_QUANT
        case Iff():
            return _LEVEL_IFF
        case Implies():
            return _LEVEL_IMP
        case Or():
            return _LEVEL_OR
        case And():
            return _LEVEL_AND
        case Not():
            return _LEVEL_NOT
        case _:
            return _LEVEL_ATOM


def format_formula(f: Formula, min_level: int = 0) -> str:
    match f:
        case Truth(value):
            body = "true" if value else "false"
        case Atom("=", (l, r)):
            body = f"{format_term(l)} = {format_term(r)}"
        case Atom(p, ()):
            body = p
        case Atom(p, args):
            body = f"{p}({', '.join(format_term(a) for a in args)})"
        case DerefAtom(head, args):
            body = f"$({format_term(head)})({', '.join(format_term(a) for a in args)})"
        case Not(inner):
            body = f"~{format_formula(inner, _LEVEL_NOT)}"
        case And(l, r):
            body = f"{format_formula(l, _LEVEL_AND + 1)} & {format_formula(r, _LEVEL_AND)}"
        case Or(l, r):
            body = f"{format_formula(l, _LEVEL_OR + 1)} | {format_formula(r, _LEVEL_OR)}"
        case Implies(l, r):
            body = f"{format_formula(l, _LEVEL_IMP + 1)} => {format_formula(r, _LEVEL_IMP)}"
        case Iff(l, r):
            body = f"{format_formula(l, _LEVEL_IFF)} <=> {format_formula(r, _LEVEL_IFF + 1)}"
        case Exists(var, tn, inner):
            body = f"?{var}[{tn}]: {format_formula(inner)}"
        case Forall(var, tn, inner):
            body = f"!{var}[{tn}]: {format_formula(inner)}"
        case GuardC(inner):
            body = f"<<c: {format_formula(inner)}>>"
        case GuardI(inner):
            body = f"<<i: {format_formula(inner)}>>"
        case _:
            raise TypeError(f"not a formula: {f!r}")
    if _level(f) < min_level:
        return f"({body})"
    return body


def _type_line(vocab: Vocabulary, name: str) -> str:
    supers = [sup for sub, sup in vocab.direct_edges if sub == name]
    line = f"type {name}"
    if supers != ["Universe"]:
        line += f" <: {', '.join(supers)}"
    ext = vocab.extension_of(name)
    if ext is not None:
        line += f" := {{ {', '.join(ext.members)} }}"
    return line


def _symbol_line(sig) -> str:
    if sig.is_predicate:
        if sig.argument_types:
            return f"pred {sig.name} : {' * '.join(sig.argument_types)}"
        return f"pred {sig.name}"
    if not sig.argument_types:
        return f"const {sig.name} : {sig.result_type}"
    return f"func {sig.name} : {' * '.join(sig.argument_types)} -> {sig.result_type}"


def format_theory(theory: Theory) -> str:
    """Canonical theory text: declarations in a stable dependency order
    (extension types after their members), then the concept facts, then the
    axioms."""
    vocab = theory.vocabulary
    units: list[tuple[str, str, frozenset[str]]] = []
    for t in vocab.types:
        if t.builtin:
            continue
        deps = {sup for sub, sup in vocab.direct_edges if sub == t.name}
        ext = vocab.extension_of(t.name)
        if ext is not None:
            deps |= set(ext.members)
        units.append((t.name, _type_line(vocab, t.name), frozenset(deps)))
    for sig in vocab.signatures:
        if sig.builtin:
            continue
        deps = frozenset(sig.argument_types) | {sig.result_type}
        units.append((sig.name, _symbol_line(sig), deps))

    builtin = {t.name for t in vocab.types if t.builtin}
    emitted: set[str] = set(builtin)
    lines: list[str] = []
    pending = list(units)
    while pending:
        progressed = False
        for unit in list(pending):
            name, line, deps = unit
            if deps <= emitted:
                lines.append(line)
                emitted.add(name)
                pending.remove(unit)
                progressed = True
        if not progressed:  # cyclic or dangling: emit as-is rather than loop
            for name, line, _ in pending:
                lines.append(line)
                emitted.add(name)
            break

    for fact in theory.concept_facts:
        args = ", ".join(f"`{o.name}" for o in fact.args)
        lines.append(f"define {fact.function}({args}) = `{fact.value.name}")
    for axiom in theory.axioms:
        lines.append(f"axiom {axiom.label}: {format_formula(axiom.formula)}")
    return "\n".join(lines) + "\n"
