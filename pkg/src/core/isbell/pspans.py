"""
Spans in a Fibration and the Fibrational Isbell Condition

An (A,B)-span in P is a span (f, X, g) of the total category with
Pf = Pg; cospans in P likewise have equally projecting legs. Two spans are
P-equivalent when their legs project alike and every cospan (h, Z, k)
closes both or neither.

Plain equivalence tests a span as a whole. Over a family index this is a
conjunction over components, which lets two non-isomorphic θ classify the
same span. The stable reading also compares the spans reindexed along every
stage of the base (points of a finite set, every morphism into an object of
a finite base); θ is unique up to vertical isomorphism under it, and both
readings are reported.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional

import structlog

from ..errors import EndpointMismatchError, InternalConsistencyError, ShapeMismatchError
from ..fibration.base import ComputedFibration, Mor, Obj
from ..fibration.checks import CartesianOracle, Cleavage
from ..fibration.smallness import Smallness
from ..models import CheckOutcome

logger = structlog.get_logger()


@dataclass(frozen=True)
class PSpan:
    """(left: X -> A, apex X, right: X -> B) with P(left) = P(right)"""
    fibration: ComputedFibration = field(compare=False, repr=False)
    left: Mor
    apex: Obj
    right: Mor

    def __post_init__(self):
        P = self.fibration
        if P.dom(self.left) != self.apex or P.dom(self.right) != self.apex:
            raise EndpointMismatchError("span legs must start at the apex")
        if P.project(self.left) != P.project(self.right):
            raise ShapeMismatchError("span legs project to different base morphisms")

    @property
    def source(self) -> Obj:
        return self.fibration.cod(self.left)

    @property
    def target(self) -> Obj:
        return self.fibration.cod(self.right)

    @property
    def projection(self) -> Any:
        return self.fibration.project(self.left)

    @property
    def is_vertical(self) -> bool:
        return self.fibration.is_vertical(self.left)

    def to_dict(self) -> dict[str, Any]:
        P = self.fibration
        return {
            "left": P.label_morphism(self.left),
            "apex": P.label_object(self.apex),
            "right": P.label_morphism(self.right),
        }


@dataclass(frozen=True)
class PCospan:
    """(left: A -> Z, apex Z, right: B -> Z) with P(left) = P(right)"""
    fibration: ComputedFibration = field(compare=False, repr=False)
    left: Mor
    apex: Obj
    right: Mor

    def __post_init__(self):
        P = self.fibration
        if P.cod(self.left) != self.apex or P.cod(self.right) != self.apex:
            raise EndpointMismatchError("cospan legs must end at the apex")
        if P.project(self.left) != P.project(self.right):
            raise ShapeMismatchError("cospan legs project to different base morphisms")


def _fiber_of(P: ComputedFibration, A: Obj, B: Obj) -> Any:
    I = P.project_object(A)
    if P.project_object(B) != I:
        raise EndpointMismatchError("A and B lie in different fibers")
    return I


def all_pspans(
    P: ComputedFibration,
    A: Obj,
    B: Obj,
    bound: Optional[int] = None,
    vertical: bool = False,
) -> Iterator[PSpan]:
    """Every (A,B)-span in P with apex over a base object in the universe"""
    I = _fiber_of(P, A, B)
    for K in ([I] if vertical else P.base.objects(bound)):
        for u in ([P.base.identity(I)] if vertical else P.base.hom(K, I)):
            for X in P.objects_over(K):
                for f in P.hom_over(X, A, u):
                    for g in P.hom_over(X, B, u):
                        yield PSpan(P, f, X, g)


def all_pcospans(
    P: ComputedFibration,
    A: Obj,
    B: Obj,
    bound: Optional[int] = None,
    vertical: bool = False,
) -> Iterator[PCospan]:
    I = _fiber_of(P, A, B)
    for L in ([I] if vertical else P.base.objects(bound)):
        for v in ([P.base.identity(I)] if vertical else P.base.hom(I, L)):
            for Z in P.objects_over(L):
                for h in P.hom_over(A, Z, v):
                    for k in P.hom_over(B, Z, v):
                        yield PCospan(P, h, Z, k)


def closes(span: PSpan, cospan: PCospan) -> bool:
    """h∘f = k∘g"""
    P = span.fibration
    return P.compose(span.left, cospan.left) == P.compose(span.right, cospan.right)


class SpanOracle:
    """
    Memoized cospan signatures of (A,B)-spans

    plain(span) is the vector of cospans it closes; stable(span) adds the
    vectors of its reindexings along every stage of its base object.
    """

    def __init__(
        self,
        P: ComputedFibration,
        A: Obj,
        B: Obj,
        bound: Optional[int] = None,
        cleavage: Optional[Cleavage] = None,
        vertical_cospans: bool = False,
    ):
        self.P = P
        self.cospans = tuple(all_pcospans(P, A, B, bound, vertical_cospans))
        self.cleavage = cleavage or Cleavage(P, bound, rule="declared")
        self._plain: dict[PSpan, tuple[bool, ...]] = {}
        self._stable: dict[PSpan, tuple[Any, ...]] = {}

    def plain(self, span: PSpan) -> tuple[Any, ...]:
        if span not in self._plain:
            self._plain[span] = tuple(closes(span, cospan) for cospan in self.cospans)
        return (span.projection, self._plain[span])

    def reindex(self, span: PSpan, t: Any) -> PSpan:
        P = self.P
        lift = self.cleavage.lift(span.apex, t)
        return PSpan(P, P.compose(lift, span.left), P.dom(lift), P.compose(lift, span.right))

    def stable(self, span: PSpan) -> tuple[Any, ...]:
        if span not in self._stable:
            K = self.P.project_object(span.apex)
            stages = tuple(self.plain(self.reindex(span, t))[1] for t in self.P.base.stages(K))
            self._stable[span] = (*self.plain(span), stages)
        return self._stable[span]


def pspans_equivalent(
    P: ComputedFibration,
    s1: PSpan,
    s2: PSpan,
    bound: Optional[int] = None,
    vertical_only: bool = False,
    stable: bool = False,
    cleavage: Optional[Cleavage] = None,
) -> bool:
    """
    s1 ∼_P s2

    vertical_only restricts the cospans to vertical ones; stable also
    compares reindexings along every stage.
    """
    if (s1.source, s1.target) != (s2.source, s2.target):
        raise EndpointMismatchError("spans do not share their endpoints")
    if s1.projection != s2.projection:
        return False
    oracle = SpanOracle(P, s1.source, s1.target, bound, cleavage, vertical_only)
    if stable:
        return oracle.stable(s1) == oracle.stable(s2)
    return oracle.plain(s1) == oracle.plain(s2)


# ============= CHOICE SPANS =============

@dataclass(frozen=True)
class VerticalSpan:
    left: Mor
    apex: Obj
    right: Mor


@dataclass
class ChoiceSpanData:
    """
    A candidate choice span (π_A, R, π_B) with π = Pπ_A: Σ -> I

    vertical carries the cloven form (p_A, R, p_B) over Σ into π*A, π*B;
    classify, when present, maps a span to its θ in closed form.
    """
    sigma: Any
    pi: Any
    left: Mor
    apex: Obj
    right: Mor
    vertical: Optional[VerticalSpan] = None
    classify: Optional[Callable[[PSpan], Mor]] = field(default=None, repr=False)
    details: dict[str, Any] = field(default_factory=dict)

    def span(self, P: ComputedFibration) -> PSpan:
        return PSpan(P, self.left, self.apex, self.right)


def _check_candidate(P: ComputedFibration, candidate: ChoiceSpanData, A: Obj, B: Obj) -> None:
    span = candidate.span(P)
    if span.source != A or span.target != B:
        raise EndpointMismatchError("choice span does not go from A to B")
    if span.projection != candidate.pi:
        raise ShapeMismatchError("choice span legs do not project to π")


def _effective_bound(P: ComputedFibration, bound: Optional[int]) -> Optional[int]:
    return None if P.exact else (P.bound if bound is None else bound)


def _vertical_isomorphic(P: ComputedFibration, theta: Mor, reference: Mor, K: Any) -> bool:
    """Some vertical iso ν with reference∘ν = θ"""
    identity = P.base.identity(K)
    for nu in P.hom_over(P.dom(theta), P.dom(reference), identity):
        if P.compose(nu, reference) == theta and P.is_vertical_iso(nu):
            return True
    return False


def _unique_up_to_iso(P: ComputedFibration, thetas: list[Mor], K: Any) -> bool:
    return all(_vertical_isomorphic(P, theta, thetas[0], K) for theta in thetas[1:])


def check_fib_isbell(
    P: ComputedFibration,
    candidate: ChoiceSpanData,
    A: Obj,
    B: Obj,
    bound: Optional[int] = None,
    smallness: Optional[Smallness] = None,
    cleavage: Optional[Cleavage] = None,
) -> CheckOutcome:
    """
    Every (A,B)-span has a cartesian θ: S -> R with (f,X,g) ∼_P (π_Aθ, S, π_Bθ)

    Candidates θ are bucketed by the signature of (π_Aθ, S, π_Bθ) once per
    (K, u), so each span is decided by one lookup. Passes when every span
    finds a θ and all of its θ are vertically isomorphic under the stable
    reading.
    """
    effective = _effective_bound(P, bound)
    I = _fiber_of(P, A, B)
    _check_candidate(P, candidate, A, B)
    outcome = CheckOutcome(
        check="fib_isbell",
        target=P.name,
        holds=True,
        exact=P.exact,
        bound=effective,
        truncated=not P.exact and P.base.exceeds_bound(I),
    )
    if smallness is not None and not smallness.contains(candidate.pi):
        return outcome.fail({"reason": "projection_not_small", "pi": P.base.label_morphism(candidate.pi)})

    cleavage = cleavage or Cleavage(P, effective, rule="declared")
    oracle = SpanOracle(P, A, B, effective, cleavage)
    cartesian = CartesianOracle(P, effective)
    R = candidate.apex
    spans = on_the_nose = plain_ambiguous = 0

    for K in P.base.objects(effective):
        thetas: dict[Any, list[tuple[Mor, PSpan]]] = defaultdict(list)
        for w in P.base.hom(K, candidate.sigma):
            u = P.base.compose(w, candidate.pi)
            for S in P.objects_over(K):
                for theta in P.hom_over(S, R, w):
                    if cartesian(theta):
                        composite = PSpan(P, P.compose(theta, candidate.left), S, P.compose(theta, candidate.right))
                        thetas[u].append((theta, composite))

        for u in P.base.hom(K, I):
            stable_buckets: dict[Any, list[Mor]] = defaultdict(list)
            plain_buckets: dict[Any, list[Mor]] = defaultdict(list)
            for theta, composite in thetas.get(u, []):
                stable_buckets[oracle.stable(composite)].append(theta)
                plain_buckets[oracle.plain(composite)].append(theta)
            verdicts: dict[Any, bool] = {}
            plain_verdicts: dict[Any, bool] = {}

            for span in all_pspans_over(P, A, B, K, u):
                spans += 1
                key = oracle.stable(span)
                found = stable_buckets.get(key, [])
                if not found:
                    logger.info("theta_missing", fibration=P.name)
                    return outcome.fail({"reason": "no_theta", "span": span.to_dict()})
                if key not in verdicts:
                    verdicts[key] = _unique_up_to_iso(P, found, K)
                if not verdicts[key]:
                    return outcome.fail({
                        "reason": "theta_not_unique",
                        "span": span.to_dict(),
                        "thetas": [P.label_morphism(t) for t in found[:2]],
                    })
                if len(found) > 1:
                    on_the_nose += 1
                plain_key = oracle.plain(span)
                if plain_key not in plain_verdicts:
                    plain_verdicts[plain_key] = _unique_up_to_iso(P, plain_buckets.get(plain_key, []) or found, K)
                if not plain_verdicts[plain_key]:
                    plain_ambiguous += 1
                if P.exact:
                    outcome.witnesses.append({"span": span.to_dict(), "theta": P.label_morphism(found[0])})

    outcome.details.update({
        "spans_checked": spans,
        "cospans": len(oracle.cospans),
        "theta_not_unique_on_the_nose": on_the_nose,
        "theta_ambiguous_under_plain_equivalence": plain_ambiguous,
    })
    if on_the_nose:
        outcome.notes.append(f"{on_the_nose} spans have several θ, all related by vertical isomorphisms")
    if plain_ambiguous:
        outcome.notes.append(f"{plain_ambiguous} spans admit non-isomorphic θ under plain equivalence")
    logger.info("fib_isbell_checked", fibration=P.name, spans=spans, status=outcome.status.value)
    return outcome


def all_pspans_over(P: ComputedFibration, A: Obj, B: Obj, K: Any, u: Any) -> Iterator[PSpan]:
    """The (A,B)-spans whose apex lies over K and whose legs project to u"""
    for X in P.objects_over(K):
        for f in P.hom_over(X, A, u):
            for g in P.hom_over(X, B, u):
                yield PSpan(P, f, X, g)


# ============= MEDIATING FORM =============

def _unique(candidates: list[Mor], what: str) -> Mor:
    if len(candidates) != 1:
        raise InternalConsistencyError(f"{what}: expected one morphism, found {len(candidates)}")
    return candidates[0]


class MediatingSearch:
    """
    The cloven form of a choice span, queried per base morphism u: J -> I

    For ū: J -> Σ with π∘ū = u, the reindexed legs p̃_A: ū*R -> u*A are
    the unique vertical morphisms with p̃_A ; c_A = (ū-lift of R) ; p_A,
    where c_A: u*A -> π*A is the unique morphism over ū with
    c_A ; (π-lift of A) = (u-lift of A).
    """

    def __init__(self, P: ComputedFibration, candidate: ChoiceSpanData, A: Obj, B: Obj, cleavage: Cleavage):
        if candidate.vertical is None:
            raise ShapeMismatchError("the mediating form needs the vertical span (p_A, R, p_B)")
        self.P = P
        self.candidate = candidate
        self.A, self.B = A, B
        self.I = _fiber_of(P, A, B)
        self.cleavage = cleavage
        vertical = candidate.vertical
        if P.cod(vertical.left) != cleavage.reindex(A, candidate.pi):
            raise EndpointMismatchError("p_A must land in π*A")
        if P.cod(vertical.right) != cleavage.reindex(B, candidate.pi):
            raise EndpointMismatchError("p_B must land in π*B")
        if not (P.is_vertical(vertical.left) and P.is_vertical(vertical.right)):
            raise ShapeMismatchError("p_A and p_B must be vertical")

    def candidates(self, u: Any) -> Iterator[Any]:
        """Every ū with π∘ū = u"""
        P, sigma, pi = self.P, self.candidate.sigma, self.candidate.pi
        for ubar in P.base.hom(P.base.dom(u), sigma):
            if P.base.compose(ubar, pi) == u:
                yield ubar

    def _comparison(self, Y: Obj, u: Any, ubar: Any) -> Mor:
        P, cleavage = self.P, self.cleavage
        source = cleavage.reindex(Y, u)
        target_lift = cleavage.lift(Y, self.candidate.pi)
        expected = cleavage.lift(Y, u)
        return _unique(
            [m for m in P.hom_over(source, P.dom(target_lift), ubar) if P.compose(m, target_lift) == expected],
            "comparison into the π-reindexing",
        )

    def reindexed_legs(self, u: Any, ubar: Any) -> VerticalSpan:
        P, cleavage = self.P, self.cleavage
        vertical = self.candidate.vertical
        lift_R = cleavage.lift(vertical.apex, ubar)
        apex = P.dom(lift_R)
        identity = P.base.identity(P.base.dom(u))
        legs = []
        for Y, leg in ((self.A, vertical.left), (self.B, vertical.right)):
            comparison = self._comparison(Y, u, ubar)
            expected = P.compose(lift_R, leg)
            legs.append(_unique(
                [m for m in P.hom_over(apex, cleavage.reindex(Y, u), identity)
                 if P.compose(m, comparison) == expected],
                "reindexed leg",
            ))
        return VerticalSpan(legs[0], apex, legs[1])

    def vertical_spans(self, u: Any) -> Iterator[VerticalSpan]:
        """Every vertical (u*A, u*B)-span"""
        P = self.P
        J = P.base.dom(u)
        identity = P.base.identity(J)
        uA, uB = self.cleavage.reindex(self.A, u), self.cleavage.reindex(self.B, u)
        for X in P.objects_over(J):
            for a in P.hom_over(X, uA, identity):
                for b in P.hom_over(X, uB, identity):
                    yield VerticalSpan(a, X, b)

    def buckets(self, u: Any) -> tuple[dict[VerticalSpan, list[Any]], dict[VerticalSpan, set[Any]]]:
        """
        ū indexed by the vertical span it reproduces

        strict: the reindexed legs themselves; up to iso: their precomposites
        with every vertical iso into ū*R.
        """
        P = self.P
        J = P.base.dom(u)
        identity = P.base.identity(J)
        strict: dict[VerticalSpan, list[Any]] = defaultdict(list)
        up_to_iso: dict[VerticalSpan, set[Any]] = defaultdict(set)
        for ubar in self.candidates(u):
            legs = self.reindexed_legs(u, ubar)
            strict[legs].append(ubar)
            for X in P.objects_over(J):
                for nu in P.hom_over(X, legs.apex, identity):
                    if P.is_vertical_iso(nu):
                        up_to_iso[VerticalSpan(P.compose(nu, legs.left), X, P.compose(nu, legs.right))].add(ubar)
        return strict, up_to_iso


def check_mediating_form(
    P: ComputedFibration,
    candidate: ChoiceSpanData,
    A: Obj,
    B: Obj,
    bound: Optional[int] = None,
    cleavage: Optional[Cleavage] = None,
) -> CheckOutcome:
    """
    For every u: J -> I and vertical (u*A, u*B)-span (a, X, b), exactly one
    ū with π∘ū = u reproduces (a, X, b) as (p̃_A, ū*R, p̃_B)

    The count of ū reproducing the span up to a vertical isomorphism is
    reported alongside; it exceeds one whenever Σ separates spans that are
    isomorphic.
    """
    effective = _effective_bound(P, bound)
    I = _fiber_of(P, A, B)
    _check_candidate(P, candidate, A, B)
    cleavage = cleavage or Cleavage(P, effective, rule="declared")
    search = MediatingSearch(P, candidate, A, B, cleavage)
    outcome = CheckOutcome(
        check="mediating_form",
        target=P.name,
        holds=True,
        exact=P.exact,
        bound=effective,
        truncated=not P.exact and P.base.exceeds_bound(I),
    )
    queries = iso_divergent = 0
    for J in P.base.objects(effective):
        for u in P.base.hom(J, I):
            strict, up_to_iso = search.buckets(u)
            for span in search.vertical_spans(u):
                queries += 1
                mediators = strict.get(span, [])
                if len(mediators) != 1:
                    logger.info("mediator_count_wrong", fibration=P.name, found=len(mediators))
                    return outcome.fail({
                        "reason": "no_mediator" if not mediators else "mediator_not_unique",
                        "along": P.base.label_morphism(u),
                        "span": {
                            "left": P.label_morphism(span.left),
                            "apex": P.label_object(span.apex),
                            "right": P.label_morphism(span.right),
                        },
                        "mediators": [P.base.label_morphism(m) for m in mediators],
                    })
                if len(up_to_iso.get(span, ())) != 1:
                    iso_divergent += 1
                if P.exact:
                    outcome.witnesses.append({
                        "along": P.base.label_morphism(u),
                        "mediator": P.base.label_morphism(mediators[0]),
                    })
    outcome.details.update({"queries": queries, "mediator_not_unique_up_to_iso": iso_divergent})
    if iso_divergent:
        outcome.notes.append(f"{iso_divergent} spans are reproduced up to vertical isomorphism by several ū")
    logger.info("mediating_form_checked", fibration=P.name, queries=queries, status=outcome.status.value)
    return outcome


def check_cloven_form(
    P: ComputedFibration,
    candidate: ChoiceSpanData,
    A: Obj,
    B: Obj,
    bound: Optional[int] = None,
    cleavage: Optional[Cleavage] = None,
) -> CheckOutcome:
    """
    The outer/inner biconditional for the ū of the mediating search

    For every u: J -> I, vertical span (a, X, b), v: I -> K and cospan
    (h, Z, k) over v: a;h̃ = b;k̃ iff p̃_A;h̃ = p̃_B;k̃, where h̃: u*A -> u*v*Z
    is the vertical morphism with h̃ ; (u∘v-lift of Z) = (u-lift of A) ; h.
    """
    effective = _effective_bound(P, bound)
    I = _fiber_of(P, A, B)
    _check_candidate(P, candidate, A, B)
    cleavage = cleavage or Cleavage(P, effective, rule="declared")
    search = MediatingSearch(P, candidate, A, B, cleavage)
    outcome = CheckOutcome(
        check="cloven_form",
        target=P.name,
        holds=True,
        exact=P.exact,
        bound=effective,
        truncated=not P.exact and P.base.exceeds_bound(I),
    )
    cospans = list(all_pcospans(P, A, B, effective))
    checked = 0
    for J in P.base.objects(effective):
        identity = P.base.identity(J)
        for u in P.base.hom(J, I):
            uA, uB = cleavage.reindex(A, u), cleavage.reindex(B, u)
            transported = []
            for cospan in cospans:
                v = P.project(cospan.left)
                lift_Z = cleavage.lift(cospan.apex, P.base.compose(u, v))
                legs = []
                for Y, leg, source in ((A, cospan.left, uA), (B, cospan.right, uB)):
                    expected = P.compose(cleavage.lift(Y, u), leg)
                    legs.append(_unique(
                        [m for m in P.hom_over(source, P.dom(lift_Z), identity) if P.compose(m, lift_Z) == expected],
                        "transported cospan leg",
                    ))
                transported.append(tuple(legs))

            strict, up_to_iso = search.buckets(u)
            for span in search.vertical_spans(u):
                mediators = strict.get(span) or sorted(up_to_iso.get(span, ()), key=repr)
                if not mediators:
                    return outcome.fail({"reason": "no_mediator", "along": P.base.label_morphism(u)})
                legs = search.reindexed_legs(u, mediators[0])
                for h_t, k_t in transported:
                    checked += 1
                    outer = P.compose(span.left, h_t) == P.compose(span.right, k_t)
                    inner = P.compose(legs.left, h_t) == P.compose(legs.right, k_t)
                    if outer != inner:
                        return outcome.fail({
                            "reason": "biconditional_fails",
                            "along": P.base.label_morphism(u),
                            "outer": outer,
                            "inner": inner,
                        })
    outcome.details["instances"] = checked
    return outcome
