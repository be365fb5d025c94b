"""Lexer and parser for the theory surface syntax.

Statement forms, one per line (newline or ';' terminates):

    type Cat <: Animal                   type Sound <: Concept := { meow, bark }
    func age : Animal -> Nat             const tom : Cat
    pred meow : Cat                      pred raining
    define soundOfKind(`Cat) = `meow
    axiom label: ?a[Animal]: Cat(a) & meow(a)

Formulas use ~ & | => <=> (loosest last, => right-associative), quantifiers
?x[T]: and !x[T]: whose bodies extend to the end of the enclosing
(sub)formula, implicit guards <<c: ...>> and <<i: ...>>, concept references
`name, and dereferences $(term)(args). Comments run from // to end of line.

The parser resolves every identifier against the vocabulary built so far, so
arity errors and unknown names surface here with positions, and the ASTs it
returns are ready for the type checker.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ast
from .errors import (
    ArityError,
    Location,
    ParseError,
    UnknownIdentifier,
    VocabularyError,
)
from .vocabulary import (
    BOOL,
    CONCEPT,
    ConceptExtension,
    ConceptObject,
    Vocabulary,
    base_vocabulary,
    declare_symbol,
    declare_type,
    is_subtype,
    resolve_concept,
    validate,
)

KEYWORDS = frozenset(
    ("type", "func", "pred", "const", "axiom", "define", "true", "false")
)

_MULTI_CHAR = ("<=>", ":=", "<:", "<<", ">>", "->", "=>")
_SINGLE_CHAR = "()[]{},:;=*+-`$~&|?!^"


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "nat", "kw", "op", "newline", "eof"
    text: str
    loc: Location


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)

    def push(kind: str, tok_text: str, tok_line: int, tok_col: int) -> None:
        if kind == "newline" and tokens and tokens[-1].kind == "newline":
            return
        tokens.append(Token(kind, tok_text, Location(tok_line, tok_col)))

    while i < n:
        ch = text[i]
        if ch == "\n":
            push("newline", "\n", line, col)
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        if ch.isalpha():
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            word = text[start:i]
            push("kw" if word in KEYWORDS else "ident", word, line, col)
            col += i - start
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            push("nat", text[start:i], line, col)
            col += i - start
            continue
        matched = False
        for op in _MULTI_CHAR:
            if text.startswith(op, i):
                push("op", op, line, col)
                i += len(op)
                col += len(op)
                matched = True
                break
        if matched:
            continue
        if ch in _SINGLE_CHAR:
            push("op", ch, line, col)
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", Location(line, col))

    end = Location(line, col)
    push("newline", "\n", line, col)
    tokens.append(Token("eof", "", end))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_op(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == text

    def accept_op(self, text: str) -> bool:
        if self.at_op(text):
            self.next()
            return True
        return False

    def expect_op(self, text: str) -> Token:
        tok = self.peek()
        if not self.at_op(text):
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.loc)
        return self.next()

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}", tok.loc)
        return self.next()

    def skip_newlines(self) -> None:
        while self.peek().kind == "newline":
            self.next()

    def expect_statement_end(self) -> None:
        tok = self.peek()
        if tok.kind in ("newline", "eof"):
            if tok.kind == "newline":
                self.next()
            return
        if self.accept_op(";"):
            return
        raise ParseError(f"expected end of statement, found {tok.text!r}", tok.loc)


class _FormulaParser:
    """Recursive-descent formula/term parser over a fixed vocabulary."""

    def __init__(self, stream: TokenStream, vocab: Vocabulary, scope: dict[str, str]):
        self.s = stream
        self.vocab = vocab
        self.scope = dict(scope)

    # formulas, loosest binding first -------------------------------------

    def formula(self) -> ast.Formula:
        left = self.implication()
        while self.s.at_op("<=>"):
            loc = self.s.next().loc
            right = self.implication()
            left = ast.Iff(left, right, loc=loc)
        return left

    def implication(self) -> ast.Formula:
        left = self.disjunction()
        if self.s.at_op("=>"):
            loc = self.s.next().loc
            right = self.implication()
            return ast.Implies(left, right, loc=loc)
        return left

    def disjunction(self) -> ast.Formula:
        left = self.conjunction()
        if self.s.at_op("|"):
            loc = self.s.next().loc
            right = self.disjunction()
            return ast.Or(left, right, loc=loc)
        return left

    def conjunction(self) -> ast.Formula:
        left = self.unary()
        if self.s.at_op("&"):
            loc = self.s.next().loc
            right = self.conjunction()
            return ast.And(left, right, loc=loc)
        return left

    def unary(self) -> ast.Formula:
        tok = self.s.peek()
        if self.s.accept_op("~"):
            return ast.Not(self.unary(), loc=tok.loc)
        if tok.kind == "op" and tok.text in ("?", "!"):
            return self.quantifier()
        if self.s.at_op("<<"):
            return self.guard()
        return self.primary()

    def quantifier(self) -> ast.Formula:
        tok = self.s.next()
        var = self.s.expect_ident("variable name").text
        self.s.expect_op("[")
        type_tok = self.s.expect_ident("type name")
        if not self.vocab.has_type(type_tok.text):
            raise UnknownIdentifier(f"unknown type {type_tok.text!r}", type_tok.loc)
        self.s.expect_op("]")
        self.s.expect_op(":")
        shadowed = self.scope.get(var)
        self.scope[var] = type_tok.text
        body = self.formula()
        if shadowed is None:
            del self.scope[var]
        else:
            self.scope[var] = shadowed
        node = ast.Exists if tok.text == "?" else ast.Forall
        return node(var, type_tok.text, body, loc=tok.loc)

    def guard(self) -> ast.Formula:
        open_tok = self.s.expect_op("<<")
        mode = self.s.expect_ident("guard mode 'c' or 'i'")
        if mode.text not in ("c", "i"):
            raise ParseError(f"expected guard mode 'c' or 'i', found {mode.text!r}", mode.loc)
        self.s.expect_op(":")
        body = self.formula()
        self.s.expect_op(">>")
        node = ast.GuardC if mode.text == "c" else ast.GuardI
        return node(body, loc=open_tok.loc)

    def primary(self) -> ast.Formula:
        tok = self.s.peek()
        if tok.kind == "kw" and tok.text in ("true", "false"):
            self.s.next()
            return ast.Truth(tok.text == "true", loc=tok.loc)
        # A primary is either an atom built from a term (possibly an equality)
        # or a parenthesized formula; try the term reading first and fall back.
        mark = self.s.pos
        try:
            term = self.term()
        except ParseError:
            self.s.pos = mark
            if self.s.accept_op("("):
                inner = self.formula()
                self.s.expect_op(")")
                return inner
            raise
        if self.s.at_op("="):
            loc = self.s.next().loc
            right = self.term()
            return ast.Atom(ast.EQUALITY_ATOM, (term, right), loc=loc)
        return self._term_as_formula(term, tok)

    def _term_as_formula(self, term: ast.Term, tok: Token) -> ast.Formula:
        match term:
            case ast.Apply(symbol, args):
                return ast.Atom(symbol, args, loc=tok.loc)
            case ast.Deref(head, args):
                return ast.DerefAtom(head, args, loc=tok.loc)
            case ast.Variable(name):
                raise ParseError(f"variable {name!r} cannot stand alone as a formula", tok.loc)
            case ast.NatLiteral():
                raise ParseError("a number is not a formula", tok.loc)
            case ast.ConceptRef():
                raise ParseError("a concept reference is not a formula", tok.loc)
        raise ParseError("expected a formula", tok.loc)

    # terms ------------------------------------------------------------------

    def term(self) -> ast.Term:
        left = self.product()
        while self.s.peek().kind == "op" and self.s.peek().text in ("+", "-"):
            op = self.s.next()
            right = self.product()
            left = ast.Apply(op.text, (left, right), loc=op.loc)
        return left

    def product(self) -> ast.Term:
        left = self.term_primary()
        while self.s.at_op("*"):
            op = self.s.next()
            right = self.term_primary()
            left = ast.Apply(op.text, (left, right), loc=op.loc)
        return left

    def term_primary(self) -> ast.Term:
        tok = self.s.peek()
        if tok.kind == "nat":
            self.s.next()
            return ast.NatLiteral(int(tok.text), loc=tok.loc)
        if self.s.accept_op("`"):
            return self.concept_ref(tok.loc)
        if self.s.accept_op("$"):
            self.s.expect_op("(")
            head = self.term()
            self.s.expect_op(")")
            args = self.argument_list()
            return ast.Deref(head, args, loc=tok.loc)
        if self.s.accept_op("("):
            inner = self.term()
            self.s.expect_op(")")
            return inner
        if tok.kind == "ident":
            self.s.next()
            name = tok.text
            if name in self.scope:
                return ast.Variable(name, loc=tok.loc)
            sig = self.vocab.signature(name)
            if sig is None:
                raise UnknownIdentifier(f"unknown identifier {name!r}", tok.loc)
            args = self.argument_list() if self.s.at_op("(") else ()
            if len(args) != sig.arity:
                raise ArityError(
                    f"{name!r} expects {sig.arity} argument(s), got {len(args)}", tok.loc
                )
            return ast.Apply(name, args, loc=tok.loc)
        raise ParseError(f"expected a term, found {tok.text or 'end of input'!r}", tok.loc)

    def concept_ref(self, loc: Location) -> ast.Term:
        name_tok = self.s.expect_ident("symbol or type name after '`'")
        name = name_tok.text
        if self.s.accept_op("^"):
            name += "^"
        concept = resolve_concept(self.vocab, name)
        if concept is None:
            raise UnknownIdentifier(f"unknown concept name {name!r}", name_tok.loc)
        return ast.ConceptRef(concept, loc=loc)

    def argument_list(self) -> tuple[ast.Term, ...]:
        self.s.expect_op("(")
        if self.s.accept_op(")"):
            return ()
        args = [self.term()]
        while self.s.accept_op(","):
            args.append(self.term())
        self.s.expect_op(")")
        return tuple(args)


def parse_formula(
    text: str,
    vocab: Vocabulary,
    free_var_types: dict[str, str] | list[tuple[str, str]] = (),
) -> ast.Formula:
    """Parse a single formula; free variables must be listed with their types."""
    stream = TokenStream(tokenize(text))
    stream.skip_newlines()
    scope = dict(free_var_types)
    for type_name in scope.values():
        if not vocab.has_type(type_name):
            raise UnknownIdentifier(f"unknown type {type_name!r} for free variable")
    parser = _FormulaParser(stream, vocab, scope)
    formula = parser.formula()
    stream.skip_newlines()
    tok = stream.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.loc)
    return formula


def parse_term(text: str, vocab: Vocabulary, free_var_types=()) -> ast.Term:
    stream = TokenStream(tokenize(text))
    stream.skip_newlines()
    parser = _FormulaParser(stream, vocab, dict(free_var_types))
    term = parser.term()
    stream.skip_newlines()
    tok = stream.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.loc)
    return term


class _TheoryParser:
    def __init__(self, text: str):
        self.s = TokenStream(tokenize(text))
        self.vocab = base_vocabulary()
        self.axioms: list[ast.Axiom] = []
        self.facts: list[ast.ConceptFact] = []
        self._auto_label = 0

    def parse(self) -> ast.Theory:
        while True:
            self.s.skip_newlines()
            tok = self.s.peek()
            if tok.kind == "eof":
                break
            if tok.kind != "kw":
                raise ParseError(
                    f"expected a declaration or axiom, found {tok.text!r}", tok.loc
                )
            handler = {
                "type": self.type_decl,
                "func": self.func_decl,
                "pred": self.pred_decl,
                "const": self.const_decl,
                "define": self.define_stmt,
                "axiom": self.axiom_stmt,
            }.get(tok.text)
            if handler is None:
                raise ParseError(f"unexpected keyword {tok.text!r} at statement start", tok.loc)
            self.s.next()
            handler(tok.loc)
            self.s.expect_statement_end()
        report = validate(self.vocab)
        if not report.ok:
            raise ParseError(f"invalid vocabulary: {report.violations[0]}")
        return ast.Theory(self.vocab, tuple(self.axioms), tuple(self.facts))

    def _declare(self, fn, loc: Location, *args, **kwargs) -> None:
        try:
            self.vocab = fn(self.vocab, *args, **kwargs)
        except VocabularyError as err:
            err.loc = loc
            raise

    def type_decl(self, loc: Location) -> None:
        name = self.s.expect_ident("type name").text
        supertypes: list[str] = []
        if self.s.accept_op("<:"):
            supertypes.append(self.s.expect_ident("supertype name").text)
            while self.s.accept_op(","):
                supertypes.append(self.s.expect_ident("supertype name").text)
        extension = None
        if self.s.accept_op(":="):
            self.s.expect_op("{")
            members: list[str] = []
            if not self.s.at_op("}"):
                members.append(self._extension_member())
                while self.s.accept_op(","):
                    members.append(self._extension_member())
            self.s.expect_op("}")
            extension = ConceptExtension(name, tuple(members))
        self._declare(declare_type, loc, name, supertypes, extension)

    def _extension_member(self) -> str:
        self.s.accept_op("`")  # members may be written bare or as references
        return self.s.expect_ident("extension member").text

    def _type_list(self) -> list[str]:
        names = [self.s.expect_ident("type name").text]
        while self.s.accept_op("*"):
            names.append(self.s.expect_ident("type name").text)
        return names

    def func_decl(self, loc: Location) -> None:
        name = self.s.expect_ident("function name").text
        self.s.expect_op(":")
        args = self._type_list()
        self.s.expect_op("->")
        result = self.s.expect_ident("result type").text
        self._declare(declare_symbol, loc, name, args, result)

    def const_decl(self, loc: Location) -> None:
        name = self.s.expect_ident("constant name").text
        self.s.expect_op(":")
        result = self.s.expect_ident("type name").text
        self._declare(declare_symbol, loc, name, [], result)

    def pred_decl(self, loc: Location) -> None:
        name = self.s.expect_ident("predicate name").text
        args: list[str] = []
        if self.s.accept_op(":"):
            args = self._type_list()
        self._declare(declare_symbol, loc, name, args, BOOL)

    def define_stmt(self, loc: Location) -> None:
        name_tok = self.s.expect_ident("function name")
        sig = self.vocab.signature(name_tok.text)
        if sig is None:
            raise UnknownIdentifier(f"unknown symbol {name_tok.text!r}", name_tok.loc)
        if not is_subtype(self.vocab, sig.result_type, CONCEPT):
            raise ParseError(
                f"define requires a concept-valued function, {name_tok.text!r} "
                f"yields {sig.result_type}",
                name_tok.loc,
            )
        self.s.expect_op("(")
        args: list[ConceptObject] = []
        if not self.s.at_op(")"):
            args.append(self._fact_concept())
            while self.s.accept_op(","):
                args.append(self._fact_concept())
        self.s.expect_op(")")
        if len(args) != sig.arity:
            raise ArityError(
                f"{name_tok.text!r} expects {sig.arity} argument(s), got {len(args)}",
                name_tok.loc,
            )
        self.s.expect_op("=")
        value = self._fact_concept()
        self.facts.append(ast.ConceptFact(name_tok.text, tuple(args), value, loc=loc))

    def _fact_concept(self) -> ConceptObject:
        tok = self.s.peek()
        self.s.expect_op("`")
        name_tok = self.s.expect_ident("concept name")
        name = name_tok.text
        if self.s.accept_op("^"):
            name += "^"
        concept = resolve_concept(self.vocab, name)
        if concept is None:
            raise UnknownIdentifier(f"unknown concept name {name!r}", tok.loc)
        return concept

    def axiom_stmt(self, loc: Location) -> None:
        label: str | None = None
        if self.s.peek().kind == "ident" and self.s.peek(1).kind == "op" and self.s.peek(1).text == ":":
            label = self.s.next().text
            self.s.next()
        if label is None:
            self._auto_label += 1
            label = f"ax{self._auto_label}"
        if any(a.label == label for a in self.axioms):
            raise ParseError(f"duplicate axiom label {label!r}", loc)
        parser = _FormulaParser(self.s, self.vocab, {})
        formula = parser.formula()
        self.axioms.append(ast.Axiom(label, formula, loc=loc))


def parse_theory(text: str) -> ast.Theory:
    """Parse a complete theory; the resulting vocabulary is validated and
    every axiom is a closed, arity-correct formula."""
    return _TheoryParser(text).parse()
