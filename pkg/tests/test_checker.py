"""
Tests for directive dispatch and the report schema
"""
from pathlib import Path

import pytest

from src.api.schemas.document import CheckDirective
from src.api.schemas.report import CheckReport, RunReport
from src.core.errors import LawViolationError, ShapeMismatchError, UnknownDirectiveError
from src.core.models import CheckOutcome, CheckStatus
from src.dsl import load, parse
from src.services.checker import run_all, run_check

FIXTURES = Path(__file__).parent / "fixtures"


def workspace(name: str, bound: int = 2):
    doc = parse((FIXTURES / name).read_text(encoding="utf-8"))
    return doc, load(doc, bound)


class TestFiniteCategories:
    def test_arrow_directives_pass(self):
        doc, ws = workspace("arrow.fib")
        reports = run_all(ws, doc.checks, bound=2, schema_version="1.0")
        assert [r.check for r in reports] == ["validate", "isbell-check", "concretize"]
        assert all(r.status == CheckStatus.PASS for r in reports)

    def test_isbell_sizes(self):
        doc, ws = workspace("arrow.fib")
        report = run_check(ws, CheckDirective(directive="isbell-check", args=["Arr"]), bound=2)
        assert report.details["sizes"] == {"a,a": 1, "a,b": 1, "b,a": 1, "b,b": 1}
        assert report.exact and report.bound is None

    def test_concretize_is_faithful(self):
        doc, ws = workspace("arrow.fib")
        report = run_check(ws, CheckDirective(directive="concretize", args=["Arr"]), bound=2)
        assert report.details["faithful"] is True
        assert set(report.details["objects"]) == {"a", "b"}

    def test_validate_reports_smallness(self):
        doc, ws = workspace("arrow.fib")
        report = run_check(ws, CheckDirective(directive="validate"), bound=2)
        assert report.details["Arr"] == {"kind": "category", "valid": True}
        assert report.details["All"]["status"] == "pass"

    def test_broken_table_fails_validation(self):
        doc, ws = workspace("invalid.fib")
        report = run_check(ws, doc.checks[0], bound=2)
        assert report.status == CheckStatus.FAIL
        assert report.counterexample["declaration"] == "Broken"
        laws = {v["law"] for v in report.details["Broken"]["violations"]}
        assert "associativity" in laws

    def test_other_directives_raise_on_invalid_declarations(self):
        doc, ws = workspace("invalid.fib")
        with pytest.raises(LawViolationError):
            run_check(ws, CheckDirective(directive="isbell-check", args=["Broken"]), bound=2)


class TestFamilies:
    def test_z2_directives(self):
        doc, ws = workspace("z2.fib")
        reports = run_all(ws, doc.checks, bound=3)
        assert [r.status for r in reports] == [CheckStatus.PASS] * 3

    def test_directive_bound_wins(self):
        doc, ws = workspace("z2.fib")
        report = run_check(ws, doc.checks[0], bound=1)
        assert report.bound == 2
        assert not report.exact
        assert report.details["fiber_objects"] == {"0": 1, "1": 1, "2": 1}

    def test_fib_isbell_labels_pairs(self):
        doc, ws = workspace("z2.fib")
        report = run_check(ws, doc.checks[1])
        assert report.details["A,A"]["status"] == "pass"

    def test_injective_legs_are_not_small(self):
        doc, ws = workspace("z2.fib")
        report = run_check(ws, CheckDirective(directive="concrete-check", args=["Z2", "Inj"]), bound=2)
        assert report.status == CheckStatus.FAIL
        assert report.counterexample["check"].startswith("sigma.")
        assert report.counterexample["law"] == "small_leg"
        assert report.details["construction"]["carrier"] == 4

    def test_families_must_belong_to_the_target(self):
        doc, ws = workspace("arrow.fib")
        with pytest.raises(ShapeMismatchError):
            run_check(ws, CheckDirective(directive="fib-isbell", args=["Arr", "Ends"]), bound=1)

    def test_category_smallness_cannot_check_families(self):
        doc, ws = workspace("arrow.fib")
        with pytest.raises(ShapeMismatchError):
            run_check(ws, CheckDirective(directive="concrete-check", args=["Arr", "All"]), bound=1)


class TestRunner:
    def test_unknown_directive(self):
        doc, ws = workspace("arrow.fib")
        with pytest.raises(UnknownDirectiveError):
            run_check(ws, CheckDirective(directive="frobnicate", args=["Arr"]))

    def test_parallel_keeps_directive_order(self):
        doc, ws = workspace("arrow.fib")
        directives = [*doc.checks, CheckDirective(directive="construct-equivalence", args=["Arr"], bound=1)]
        serial = run_all(ws, directives, bound=2)
        parallel = run_all(ws, directives, bound=2, parallel=True, workers=2)
        assert [r.model_dump() for r in parallel] == [r.model_dump() for r in serial]

    def test_reruns_are_byte_identical(self):
        doc, ws = workspace("z2.fib")
        first = RunReport.combine(run_all(ws, doc.checks), "z2.fib", "1.0").model_dump_json(indent=2)
        second = RunReport.combine(run_all(ws, doc.checks), "z2.fib", "1.0").model_dump_json(indent=2)
        assert first == second


class TestReports:
    def test_from_outcome(self):
        outcome = CheckOutcome(check="demo", target="X", holds=True, exact=False, bound=2)
        outcome.details[(1, 2)] = {frozenset({"b", "a"})}
        report = CheckReport.from_outcome(outcome, "1.0")
        assert report.bound == 2
        assert report.details == {"(1, 2)": [["a", "b"]]}

    def test_overall_status(self):
        def report(status):
            outcome = CheckOutcome(check="demo", target="X", holds=status != CheckStatus.FAIL)
            outcome.truncated = status == CheckStatus.BOUND_TOO_SMALL
            return CheckReport.from_outcome(outcome, "1.0")

        truncated = RunReport.combine([report(CheckStatus.PASS), report(CheckStatus.BOUND_TOO_SMALL)], "x", "1.0")
        assert truncated.status == CheckStatus.BOUND_TOO_SMALL
        assert truncated.exit_code == 0
        failed = RunReport.combine([report(CheckStatus.BOUND_TOO_SMALL), report(CheckStatus.FAIL)], "x", "1.0")
        assert failed.exit_code == 1
