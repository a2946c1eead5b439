"""
Check Service

Dispatches .fib check directives to the core library and wraps each
outcome in the shared report schema:

- validate: every declaration seals, every smallness predicate is closed
- isbell-check / concretize / construct-equivalence on finite categories
- externalize / fib-isbell / mediating-form / cloven-form / concrete-check
  on Fam of a category or internal category
- smallness-check on a named predicate

Checks are pure, so run_all may hand them to worker threads; reports are
always returned in directive order.
"""
import asyncio
import time
from typing import Callable, Optional

import structlog

from config.settings import get_settings

from ..api.schemas.document import CheckDirective
from ..api.schemas.report import CheckReport
from ..core.category.fincat import category_violations, faithfulness_witness, set_functor_violations
from ..core.category.finset import canonical, identity
from ..core.category.spans import concretize, isbell_report
from ..core.category.universe import FinSetUniverse
from ..core.errors import EndpointMismatchError, ShapeMismatchError, UnknownDirectiveError
from ..core.fibration.checks import is_fibration
from ..core.fibration.fibered import is_concrete_fibration
from ..core.fibration.smallness import FunctionClass, all_small, check_smallness
from ..core.internal.externalization import Externalization, FamObject, externalize, family
from ..core.internal.internal_category import canonical_faithful_diagram, internal_category_violations
from ..core.isbell.choice_spans import fam_choice_span, small_fib_choice_span, verify_small_fib_isbell
from ..core.isbell.concreteness import (
    check_concreteness,
    concreteness_diagram,
    concreteness_summary,
    diagram_fibered_functor,
    sigma_fibered_functor,
)
from ..core.isbell.fam_sets import fam_construct_equivalence
from ..core.isbell.pspans import check_cloven_form, check_fib_isbell, check_mediating_form
from ..core.models import CheckOutcome, CheckStatus
from ..dsl.loader import Workspace, raw_category, raw_internal

logger = structlog.get_logger()

Handler = Callable[[Workspace, list[str], int], CheckOutcome]


def _outcome(directive: str, args: list[str], bound: int) -> CheckOutcome:
    return CheckOutcome(check=directive, target=" ".join(args), holds=True, exact=True, bound=bound)


def _single(args: list[str], directive: str) -> str:
    if len(args) != 1:
        raise ShapeMismatchError(f"{directive} takes exactly one target, got {len(args)}")
    return args[0]


# ============= DECLARATIONS =============

def _validate(ws: Workspace, args: list[str], bound: int) -> CheckOutcome:
    outcome = _outcome("validate", args, bound)
    names = args or list(ws.document.names())
    for name in names:
        kind = ws.kind(name)
        decl = ws.declaration(name)
        if kind == "category":
            violations = category_violations(raw_category(decl)) if name in ws.invalid else []
        elif kind == "internal":
            violations = internal_category_violations(raw_internal(decl)) if name in ws.invalid else []
        else:
            violations = []
        entry = {"kind": kind, "valid": name not in ws.invalid}
        if name in ws.invalid:
            entry["error"] = str(ws.invalid[name])
            entry["violations"] = [v.to_dict() for v in violations]
            outcome.fail({"declaration": name, "error": str(ws.invalid[name])})
        elif kind == "smallness":
            outcome.merge(check_smallness(ws.small(name)), name)
            continue
        outcome.details[name] = entry
    return outcome


def _smallness_check(ws: Workspace, args: list[str], bound: int) -> CheckOutcome:
    name = _single(args, "smallness-check")
    outcome = _outcome("smallness-check", args, bound)
    outcome.merge(check_smallness(ws.small(name)), name)
    return outcome


# ============= FINITE CATEGORIES =============

def _isbell_check(ws: Workspace, args: list[str], bound: int) -> CheckOutcome:
    C = ws.category(_single(args, "isbell-check"))
    report = isbell_report(C)
    outcome = _outcome("isbell-check", args, bound)
    outcome.details["sizes"] = {f"{a},{b}": n for (a, b), n in report.sizes().items()}
    outcome.witnesses = report.to_dict()["pairs"]
    return outcome


def _concretize(ws: Workspace, args: list[str], bound: int) -> CheckOutcome:
    C = ws.category(_single(args, "concretize"))
    U = concretize(C)
    outcome = _outcome("concretize", args, bound)
    outcome.details["objects"] = {b: list(U.map_object(b).elements) for b in C.objects}
    outcome.details["morphisms"] = {m: U.map_morphism(m).as_dict() for m in C.morphism_ids}
    violations = set_functor_violations(U)
    if violations:
        outcome.fail({"step": "functor_laws", **violations[0].to_dict()})
    witness = faithfulness_witness(U)
    outcome.details["faithful"] = witness is None
    if witness is not None:
        outcome.fail({"step": "faithfulness", "identified": list(witness)})
    return outcome


def _construct_equivalence(ws: Workspace, args: list[str], bound: int) -> CheckOutcome:
    C = ws.category(_single(args, "construct-equivalence"))
    outcome = _outcome("construct-equivalence", args, bound)
    outcome.merge(fam_construct_equivalence(C, bound), C.name)
    return outcome


# ============= EXTERNALIZATION =============

def _externalize(ws: Workspace, args: list[str], bound: int) -> CheckOutcome:
    C = ws.internal(_single(args, "externalize"))
    E = externalize(C, bound)
    outcome = _outcome("externalize", args, bound)
    objects, morphisms = {}, {}
    for I in E.base.objects():
        over = list(E.objects_over(I))
        objects[len(I)] = len(over)
        morphisms[len(I)] = sum(len(list(E.hom_over(X, Y, identity(I)))) for X in over for Y in over)
    outcome.details["fiber_objects"] = objects
    outcome.details["fiber_morphisms"] = morphisms
    outcome.merge(is_fibration(E, bound), "fibration")
    return outcome


def _family_pairs(ws: Workspace, target: str, E: Externalization, names: list[str]) -> list[tuple[str, FamObject, FamObject]]:
    """Named (A, B), else every same-index pair of declared families, else the 1-indexed pairs"""
    if names:
        if len(names) != 2:
            raise ShapeMismatchError("expected a target and two families")
        for name in names:
            if ws.declaration(name).over != target:
                raise ShapeMismatchError(f"family {name} is not over {target}")
        A, B = ws.family(names[0]), ws.family(names[1])
        return [(f"{names[0]},{names[1]}", A, B)]
    declared = ws.families_over(target)
    pairs = [
        (f"{a},{b}", ws.family(a), ws.family(b))
        for a in declared
        for b in declared
        if ws.family(a).index == ws.family(b).index
    ]
    if pairs:
        return pairs
    point = canonical(1)
    C = E.category
    return [
        (f"{x},{y}", family(C, point, (x,)), family(C, point, (y,)))
        for x in C.C0
        for y in C.C0
    ]


def _same_index(A: FamObject, B: FamObject) -> None:
    if A.index != B.index:
        raise EndpointMismatchError("families must share an index set")


def _fib_isbell(ws: Workspace, args: list[str], bound: int) -> CheckOutcome:
    """Fam choice spans over a finite category, small-fibration choice spans over an internal one"""
    if not args:
        raise ShapeMismatchError("fib-isbell needs a target")
    target, families = args[0], args[1:]
    E = externalize(ws.internal(target), bound)
    outcome = _outcome("fib-isbell", args, bound)
    for label, A, B in _family_pairs(ws, target, E, families):
        _same_index(A, B)
        if ws.kind(target) == "category":
            data = fam_choice_span(ws.category(target), A, B)
            outcome.merge(check_fib_isbell(E, data, A, B, bound), label)
        else:
            outcome.merge(verify_small_fib_isbell(E.category, A.index, A.family, B.family, bound, E), label)
        if not outcome.holds:
            break
    return outcome


def _spans_form(name: str, check: Callable[..., CheckOutcome]) -> Handler:
    def handler(ws: Workspace, args: list[str], bound: int) -> CheckOutcome:
        if not args:
            raise ShapeMismatchError(f"{name} needs a target")
        target, families = args[0], args[1:]
        E = externalize(ws.internal(target), bound)
        outcome = _outcome(name, args, bound)
        for label, A, B in _family_pairs(ws, target, E, families):
            _same_index(A, B)
            data = small_fib_choice_span(E.category, A.index, A.family, B.family)
            outcome.merge(check(E, data, A, B, bound), label)
            if not outcome.holds:
                break
        return outcome
    return handler


def _concrete_check(ws: Workspace, args: list[str], bound: int) -> CheckOutcome:
    if not 1 <= len(args) <= 2:
        raise ShapeMismatchError("concrete-check takes a target and an optional smallness predicate")
    C = ws.internal(args[0])
    outcome = _outcome("concrete-check", args, bound)
    outcome.details["construction"] = concreteness_summary(concreteness_diagram(C))
    if len(args) == 1:
        outcome.merge(check_concreteness(C, bound), "sigma")
    else:
        S = ws.small(args[1])
        if not isinstance(S, FunctionClass):
            raise ShapeMismatchError(f"{args[1]} selects morphisms of a category, not finite-set functions")
        E = externalize(C, bound)
        outcome.merge(is_concrete_fibration(E, sigma_fibered_functor(C, bound, E), S, bound), "sigma")
    if outcome.holds:
        E = externalize(C, bound)
        S = ws.small(args[1]) if len(args) == 2 else all_small(FinSetUniverse(bound))
        canonical_functor = diagram_fibered_functor(E, canonical_faithful_diagram(C))
        outcome.merge(is_concrete_fibration(E, canonical_functor, S, bound), "canonical")
    return outcome


DIRECTIVES: dict[str, Handler] = {
    "validate": _validate,
    "isbell-check": _isbell_check,
    "concretize": _concretize,
    "externalize": _externalize,
    "fib-isbell": _fib_isbell,
    "mediating-form": _spans_form("mediating-form", check_mediating_form),
    "cloven-form": _spans_form("cloven-form", check_cloven_form),
    "concrete-check": _concrete_check,
    "smallness-check": _smallness_check,
    "construct-equivalence": _construct_equivalence,
}


# ============= RUNNER =============

def _guard_size(workspace: Workspace, args: list[str], limit: int) -> None:
    for name in args:
        if name in workspace.internals:
            size = len(workspace.internals[name].C1)
            if size > limit:
                raise ShapeMismatchError(
                    f"{name} has {size} morphisms, above max_category_morphisms={limit}"
                )


def run_check(
    workspace: Workspace,
    directive: CheckDirective,
    bound: Optional[int] = None,
    schema_version: Optional[str] = None,
) -> CheckReport:
    """
    One directive -> one report

    The directive's own bound wins over the run bound, which defaults to
    the configured one. Malformed input raises a FibcatError; mathematical
    failures come back as FAIL reports.
    """
    settings = get_settings()
    handler = DIRECTIVES.get(directive.directive)
    if handler is None:
        raise UnknownDirectiveError(directive.directive)
    _guard_size(workspace, directive.args, settings.max_category_morphisms)
    effective = directive.bound if directive.bound is not None else (
        bound if bound is not None else settings.default_bound
    )
    started = time.perf_counter()
    outcome = handler(workspace, list(directive.args), effective)
    report = CheckReport.from_outcome(outcome, schema_version or settings.report_schema_version)
    log = logger.warning if report.status == CheckStatus.BOUND_TOO_SMALL else logger.info
    log(
        "check_completed",
        directive=directive.directive,
        target=report.target,
        status=report.status.value,
        bound=effective,
        elapsed_ms=round((time.perf_counter() - started) * 1000, 1),
    )
    return report


async def _run_parallel(
    workspace: Workspace,
    directives: list[CheckDirective],
    bound: Optional[int],
    schema_version: Optional[str],
    workers: int,
) -> list[CheckReport]:
    semaphore = asyncio.Semaphore(max(1, workers))

    async def one(directive: CheckDirective) -> CheckReport:
        async with semaphore:
            return await asyncio.to_thread(run_check, workspace, directive, bound, schema_version)

    return list(await asyncio.gather(*(one(d) for d in directives)))


def run_all(
    workspace: Workspace,
    directives: list[CheckDirective],
    bound: Optional[int] = None,
    schema_version: Optional[str] = None,
    parallel: bool = False,
    workers: Optional[int] = None,
) -> list[CheckReport]:
    """Every directive, reports in directive order; the first FibcatError propagates"""
    logger.info("run_started", directives=len(directives), parallel=parallel)
    if parallel:
        workers = workers or get_settings().parallel_workers
        return asyncio.run(_run_parallel(workspace, directives, bound, schema_version, workers))
    return [run_check(workspace, d, bound, schema_version) for d in directives]
