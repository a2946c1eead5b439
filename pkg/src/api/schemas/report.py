"""
Report Schemas

Versioned JSON reports shared by every check. Keys are emitted in
declaration order and reports never carry timings, so reruns on the same
input and bound are byte-identical.
"""
from typing import Any, Optional

from pydantic import BaseModel, Field

from ...core.category.finset import FinFn, FinSetObj
from ...core.models import CheckOutcome, CheckStatus


def to_jsonable(value: Any) -> Any:
    """Tuples to lists, finite sets and functions to their printed form, keys to strings"""
    if isinstance(value, (FinFn, FinSetObj)):
        return repr(value)
    if isinstance(value, dict):
        return {k if isinstance(k, str) else str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=repr) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if value is None or isinstance(value, (str, int, float, bool)):
        return value
    return str(value)


class CheckReport(BaseModel):
    """Outcome of one directive"""
    schema_version: str
    check: str
    target: str
    status: CheckStatus
    bound: Optional[int] = Field(None, description="Universe bound; null for exact checks")
    exact: bool
    witnesses: list[dict[str, Any]] = Field(default_factory=list)
    counterexample: Optional[dict[str, Any]] = None
    notes: list[str] = Field(default_factory=list)
    details: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_outcome(cls, outcome: CheckOutcome, schema_version: str) -> "CheckReport":
        return cls(
            schema_version=schema_version,
            check=outcome.check,
            target=outcome.target,
            status=outcome.status,
            bound=None if outcome.exact else outcome.bound,
            exact=outcome.exact,
            witnesses=to_jsonable(outcome.witnesses),
            counterexample=to_jsonable(outcome.counterexample),
            notes=list(outcome.notes),
            details=to_jsonable(outcome.details),
        )

    @property
    def exit_code(self) -> int:
        return 1 if self.status == CheckStatus.FAIL else 0


class RunReport(BaseModel):
    """Every report of one CLI invocation, in directive order"""
    schema_version: str
    source: str
    status: CheckStatus
    reports: list[CheckReport] = Field(default_factory=list)

    @classmethod
    def combine(cls, reports: list[CheckReport], source: str, schema_version: str) -> "RunReport":
        statuses = {report.status for report in reports}
        if CheckStatus.FAIL in statuses:
            status = CheckStatus.FAIL
        elif CheckStatus.BOUND_TOO_SMALL in statuses:
            status = CheckStatus.BOUND_TOO_SMALL
        else:
            status = CheckStatus.PASS
        return cls(schema_version=schema_version, source=source, status=status, reports=reports)

    @property
    def exit_code(self) -> int:
        return 1 if self.status == CheckStatus.FAIL else 0
