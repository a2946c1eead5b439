"""
Core result models for fibcat

Every check in the library returns a CheckOutcome; the API layer turns it
into the versioned JSON report.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    BOUND_TOO_SMALL = "bound_too_small"  # no counterexample, but the query outgrew the universe


@dataclass
class CheckOutcome:
    """Result of one verification run"""
    check: str
    target: str
    holds: bool
    exact: bool = True
    bound: Optional[int] = None
    truncated: bool = False
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    counterexample: Optional[dict[str, Any]] = None
    notes: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> CheckStatus:
        if not self.holds:
            return CheckStatus.FAIL
        if self.truncated:
            return CheckStatus.BOUND_TOO_SMALL
        return CheckStatus.PASS

    def fail(self, counterexample: dict[str, Any]) -> "CheckOutcome":
        """Record the first counterexample; later ones are ignored"""
        self.holds = False
        if self.counterexample is None:
            self.counterexample = counterexample
        return self

    def merge(self, other: "CheckOutcome", prefix: str) -> None:
        """Fold a sub-check into this outcome"""
        if not other.holds:
            self.fail({"check": f"{prefix}.{other.check}", **(other.counterexample or {})})
        self.truncated = self.truncated or other.truncated
        self.exact = self.exact and other.exact
        self.notes.extend(f"{prefix}: {note}" for note in other.notes)
        self.details[prefix] = {"status": other.status.value, **other.details}
