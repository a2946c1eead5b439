"""
Choice Spans in Fam

Two constructions of a choice span for families A, B over I:

fam_choice_span     Σ holds one representative per class of
                    (A_i, B_i)-spans for every i; θ is given in closed
                    form by classifying each component.
small_fib_choice_span
                    Σ holds every span (x, (f, g)) with f: x -> A_i and
                    g: x -> B_i, built from finite limits of the internal
                    category alone. Its mediating form picks ū uniquely.
"""
from collections import Counter
from typing import Any, Optional

import structlog

from ..category.fincat import FinCategory
from ..category.finset import (
    FinFn,
    FinSetObj,
    all_functions,
    diagonal,
    fn_product,
    identity,
    pair,
    product,
    pullback,
    then,
)
from ..category.spans import ChoiceSet, Span, choice_set
from ..errors import EndpointMismatchError
from ..fibration.checks import Cleavage
from ..internal.externalization import (
    Externalization,
    FamMorphism,
    FamObject,
    externalize,
    reindex_family,
)
from ..internal.internal_category import InternalCategory, internalize
from ..models import CheckOutcome
from .pspans import ChoiceSpanData, MediatingSearch, PSpan, VerticalSpan, check_mediating_form

logger = structlog.get_logger()


def _same_index(A: FamObject, B: FamObject) -> FinSetObj:
    if A.index != B.index:
        raise EndpointMismatchError("A and B must be indexed by the same set")
    return A.index


def _legs(C: InternalCategory, R: FamObject, A: FamObject, pi: FinFn, components: FinFn) -> tuple[FamMorphism, FamMorphism]:
    """The total leg (π, f): R -> A and its vertical part (id, f): R -> π*A"""
    total = FamMorphism(C, R, A, pi, components)
    vertical = FamMorphism(C, R, reindex_family(A, pi), identity(R.index), components)
    return total, vertical


def fam_choice_span(C: FinCategory, A: FamObject, B: FamObject) -> ChoiceSpanData:
    """
    Σ = {(i, r) | r a representative of Σ_{A_i, B_i}}, R(i, r) = apex of r

    classify sends a span (f, X, g) over u: K -> I to the cartesian
    θ = (ū, i∘R∘ū) with ū(k) the class of (f_k, X_k, g_k).
    """
    internal = internalize(C)
    I = _same_index(A, B)
    cache: dict[tuple[Any, Any], ChoiceSet] = {}

    def choices(i: Any) -> ChoiceSet:
        key = (A[i], B[i])
        if key not in cache:
            cache[key] = choice_set(C, *key)
        return cache[key]

    sigma = FinSetObj(tuple((i, rep.key) for i in I for rep in choices(i).representatives))
    pi = FinFn(sigma, I, tuple(i for i, _ in sigma))
    R = FamObject(sigma, FinFn(sigma, internal.C0, tuple(key[0] for _, key in sigma)))
    left, p_A = _legs(internal, R, A, pi, FinFn(sigma, internal.C1, tuple(key[1] for _, key in sigma)))
    right, p_B = _legs(internal, R, B, pi, FinFn(sigma, internal.C1, tuple(key[2] for _, key in sigma)))

    def classify(span: PSpan) -> FamMorphism:
        u = span.projection
        X = span.apex
        ubar = FinFn.from_callable(X.index, sigma, lambda k: (
            u(k),
            choices(u(k)).representative_of(Span(C, span.left.f(k), X[k], span.right.f(k))).key,
        ))
        S = reindex_family(R, ubar)
        return FamMorphism(internal, S, R, ubar, then(S.family, internal.i))

    logger.debug("fam_choice_span_built", category=C.name, sigma=len(sigma))
    return ChoiceSpanData(
        sigma=sigma,
        pi=pi,
        left=left,
        apex=R,
        right=right,
        vertical=VerticalSpan(p_A, R, p_B),
        classify=classify,
        details={"fiber_sizes": fiber_sizes(pi)},
    )


def small_fib_choice_span(C: InternalCategory, I: FinSetObj, A: FinFn, B: FinFn) -> ChoiceSpanData:
    """
    Σ = I ×_{C0×C0} S over <A, B> and <d1 s1, d1 s2>

    S = C0 ×_{C0×C0} (C1×C1) along the diagonal and d0×d0 has elements
    (x, (f, g)) with d0 f = d0 g = x; Σ has elements (i, (x, (f, g))) with
    d1 f = A_i and d1 g = B_i. R = σ∘h and the legs are (π, f) and (π, g).
    """
    spans = pullback(diagonal(C.C0), fn_product(C.d0, C.d0))
    sigma_leg, pair_leg = spans.p1, spans.p2
    arrows = product(C.C1, C.C1)

    limit = pullback(pair(A, B), then(pair_leg, fn_product(C.d1, C.d1)))
    sigma, pi, h = limit.apex, limit.p1, limit.p2
    R = FamObject(sigma, then(h, sigma_leg))
    left, p_A = _legs(C, R, FamObject(I, A), pi, then(h, then(pair_leg, arrows.p1)))
    right, p_B = _legs(C, R, FamObject(I, B), pi, then(h, then(pair_leg, arrows.p2)))

    logger.debug("small_fib_choice_span_built", category=C.name, sigma=len(sigma))
    return ChoiceSpanData(
        sigma=sigma,
        pi=pi,
        left=left,
        apex=R,
        right=right,
        vertical=VerticalSpan(p_A, R, p_B),
        details={"spans_object": spans.apex, "h": h, "fiber_sizes": fiber_sizes(pi)},
    )


def fiber_sizes(pi: FinFn) -> dict[Any, int]:
    counts = Counter(pi.values)
    return {i: counts.get(i, 0) for i in pi.cod}


def expected_small_fib_size(C: InternalCategory, a: Any, b: Any) -> int:
    """Σ_x |hom(x, a)|·|hom(x, b)|"""
    return sum(len(C.hom_elements(x, a)) * len(C.hom_elements(x, b)) for x in C.C0)


def verify_small_fib_isbell(
    C: InternalCategory,
    I: FinSetObj,
    A: FinFn,
    B: FinFn,
    bound: int,
    E: Optional[Externalization] = None,
) -> CheckOutcome:
    """
    The small-fibration choice span against the mediating form

    Beyond the mediating form, every vertical span (a, X, b) over u must
    factor as a unique ũ: J -> S with σũ = X, <s1, s2>ũ = <a, b>, then
    through a unique ū: J -> Σ with hū = ũ and πū = u, and that ū must be
    the mediator.
    """
    E = E or externalize(C, bound)
    data = small_fib_choice_span(C, I, A, B)
    fam_A, fam_B = data.left.target, data.right.target
    outcome = check_mediating_form(E, data, fam_A, fam_B, bound)
    outcome.check = "small_fib_isbell"
    if not outcome.holds:
        return outcome

    search = MediatingSearch(E, data, fam_A, fam_B, Cleavage(E, bound, rule="declared"))
    spans_object: FinSetObj = data.details["spans_object"]
    sigma_leg = FinFn(spans_object, C.C0, tuple(x for x, _ in spans_object))
    pair_leg = FinFn(spans_object, product(C.C1, C.C1).apex, tuple(fg for _, fg in spans_object))
    h: FinFn = data.details["h"]
    factorizations = 0
    for J in E.base.objects(bound):
        for u in E.base.hom(J, I):
            for span in search.vertical_spans(u):
                legs = pair(span.left.f, span.right.f)
                tildes = [
                    t for t in all_functions(J, spans_object)
                    if then(t, sigma_leg) == span.apex.family and then(t, pair_leg) == legs
                ]
                if len(tildes) != 1:
                    return outcome.fail({"reason": "span_factorization", "along": repr(u), "found": len(tildes)})
                ubars = [w for w in search.candidates(u) if then(w, h) == tildes[0]]
                if len(ubars) != 1:
                    return outcome.fail({"reason": "sigma_factorization", "along": repr(u), "found": len(ubars)})
                if search.reindexed_legs(u, ubars[0]) != span:
                    return outcome.fail({"reason": "mediator_mismatch", "along": repr(u)})
                factorizations += 1
    outcome.details["factorizations"] = factorizations
    logger.info("small_fib_isbell_verified", category=C.name, status=outcome.status.value)
    return outcome

