"""Error and diagnostic types shared across the package.

Every user-facing failure is a subclass of GosilError so the CLI can catch
one base class and render a uniform diagnostic. Parse-time errors carry a
source Location; later stages carry the offending expression instead (the
expression remembers its own location when it came from source text).
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Location:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class GosilError(Exception):
    """Base class for all diagnostics raised by this package."""

    def __init__(self, message: str, loc: Location | None = None):
        super().__init__(message)
        self.message = message
        self.loc = loc

    @property
    def kind(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        if self.loc is not None:
            return f"{self.loc}: {self.kind}: {self.message}"
        return f"{self.kind}: {self.message}"


# --- vocabulary construction -------------------------------------------------

class VocabularyError(GosilError):
    pass


class DuplicateType(VocabularyError):
    pass


class DuplicateSymbol(VocabularyError):
    pass


class UnknownType(VocabularyError):
    pass


class UnknownSupertype(VocabularyError):
    pass


class CyclicSubtyping(VocabularyError):
    pass


class ExtensionOnNonConceptType(VocabularyError):
    pass


class UnknownExtensionMember(VocabularyError):
    pass


# --- parsing ------------------------------------------------------------------

class ParseError(GosilError):
    """Malformed surface syntax; `loc` points at the offending token."""


class ArityError(ParseError):
    pass


class UnknownIdentifier(ParseError):
    pass


class UnboundVariable(ParseError):
    pass


# --- typing -------------------------------------------------------------------

TYPING_ERROR_KINDS = (
    "ArgumentTypeMismatch",
    "UnknownSymbol",
    "UnboundVariable",
    "NonBooleanSubformula",
    "GuardOnNonUniverseTerm",
    "IntensionalNotGrounded",
)


class TypingError(GosilError):
    """A typing verdict of "ill-typed", with the reason pinned down.

    `expected`/`found` are type names, populated for mismatch kinds;
    `expr` is the offending sub-expression and `path` its position in the
    checked formula (child indices from the root).
    """

    def __init__(
        self,
        error_kind: str,
        message: str,
        expr=None,
        path: tuple[int, ...] = (),
        expected: str | None = None,
        found: str | None = None,
    ):
        assert error_kind in TYPING_ERROR_KINDS, error_kind
        super().__init__(message, loc=getattr(expr, "loc", None))
        self.error_kind = error_kind
        self.expr = expr
        self.path = path
        self.expected = expected
        self.found = found

    @property
    def kind(self) -> str:
        return self.error_kind


# --- elaboration ----------------------------------------------------------------

class ElaborationError(GosilError):
    pass


class IncomparableTypes(ElaborationError):
    """Argument type neither above nor below the expected type; the guard
    construction has no reading for this and the checker would reject anyway."""


# --- grounding ------------------------------------------------------------------

class GroundingError(GosilError):
    pass


class NonTotalConceptFunction(GroundingError):
    pass


class NonFunctionalFacts(GroundingError):
    pass


class UnknownConceptMember(GroundingError):
    pass


class UnresolvableDeref(GroundingError):
    pass


class MissingExtension(GroundingError):
    pass


class GroundArityError(GroundingError):
    pass


# --- evaluation / model search ---------------------------------------------------

class EvaluationError(GosilError):
    pass


class RuntimeDerefMismatch(EvaluationError):
    pass


class UnboundedNatQuantifier(EvaluationError):
    pass


class UnassignedVariable(EvaluationError):
    pass


class IllTypedSentence(EvaluationError):
    pass


class StructureError(GosilError):
    """Invalid structure file or structure/vocabulary mismatch."""


class BoundMissing(GosilError):
    pass


class ExplosionGuard(GosilError):
    """Model search would enumerate more candidates than the configured cap."""


# --- validation reports ------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    where: str = ""

    def __str__(self) -> str:
        prefix = f"{self.where}: " if self.where else ""
        return f"{prefix}{self.kind}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str, where: str = "") -> None:
        self.violations.append(Violation(kind, message, where))

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)
