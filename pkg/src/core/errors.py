"""
Exceptions raised by fibcat

Malformed inputs and implementation bugs raise. Mathematical outcomes
(failed laws, counterexamples) are returned as data in reports.
"""
from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class Violation:
    """A named law broken by some concrete witness"""
    law: str
    message: str
    witness: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"law": self.law, "message": self.message, "witness": self.witness}


class FibcatError(Exception):
    """Base class for all fibcat errors"""


class UndefinedIdError(FibcatError):
    """A table references an id that was never declared"""

    def __init__(self, identifier: str, where: str):
        super().__init__(f"undefined id {identifier!r} referenced in {where}")
        self.identifier = identifier
        self.where = where


class PartialityError(FibcatError):
    """Composition defined on a non-composable pair or missing on a composable one"""

    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = violations


class LawViolationError(FibcatError):
    """A structure failed one or more of its defining laws"""

    def __init__(self, subject: str, violations: list[Violation]):
        summary = ", ".join(sorted({v.law for v in violations}))
        super().__init__(f"{subject} violates: {summary}")
        self.subject = subject
        self.violations = violations


class UnknownObjectError(FibcatError):
    def __init__(self, obj: Any, where: str = "category"):
        super().__init__(f"unknown object {obj!r} in {where}")
        self.obj = obj


class CodomainMismatchError(FibcatError):
    pass


class ShapeMismatchError(FibcatError):
    pass


class EndpointMismatchError(FibcatError):
    pass


class NotComposableError(FibcatError):
    pass


class NotAFibrationError(FibcatError):
    def __init__(self, message: str, counterexample: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.counterexample = counterexample or {}


class MissingPullbackError(FibcatError):
    def __init__(self, left: str, right: str):
        super().__init__(f"no pullback of cospan ({left}, {right})")
        self.left = left
        self.right = right


class InternalConsistencyError(FibcatError):
    """A construction failed a check it must pass; indicates a bug"""


class UnknownDirectiveError(FibcatError):
    def __init__(self, name: str):
        super().__init__(f"unknown directive {name!r}")
        self.name = name


class SpecSyntaxError(FibcatError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class UnresolvedReferenceError(FibcatError):
    def __init__(self, identifier: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{location}unresolved reference {identifier!r}")
        self.identifier = identifier
        self.line = line
        self.column = column
