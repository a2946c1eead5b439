"""
Spans, Cospans and the Isbell Condition

Two (A,B)-spans (f,X,g), (f',X',g') are equivalent when every (A,B)-cospan
(h,Z,k) sees them alike: hf = kg iff hf' = kg'. Equivalence is decided by
enumerating all cospans, which is finite here. A choice set keeps one
representative per class; concretize builds from the choice sets the
faithful functor into finite sets that makes a category a construct.
"""
from dataclasses import dataclass, field
from typing import Any, Iterable

import networkx as nx
import structlog

from ..errors import EndpointMismatchError, InternalConsistencyError, UnknownObjectError
from .fincat import FinCategory, SetFunctor, faithfulness_witness, set_functor_violations
from .finset import FinFn, FinSetObj

logger = structlog.get_logger()

SpanKey = tuple[str, str, str]


@dataclass(frozen=True)
class Span:
    """An (A,B)-span (left: X -> A, apex X, right: X -> B)"""
    category: FinCategory = field(compare=False, repr=False)
    left: str
    apex: str
    right: str

    def __post_init__(self):
        C = self.category
        if C.dom(self.left) != self.apex or C.dom(self.right) != self.apex:
            raise EndpointMismatchError(
                f"span legs {self.left}, {self.right} do not both start at {self.apex}"
            )

    @property
    def source(self) -> str:
        return self.category.cod(self.left)

    @property
    def target(self) -> str:
        return self.category.cod(self.right)

    @property
    def key(self) -> SpanKey:
        return (self.apex, self.left, self.right)

    def to_dict(self) -> dict[str, str]:
        return {"left": self.left, "apex": self.apex, "right": self.right}


@dataclass(frozen=True)
class Cospan:
    """An (A,B)-cospan (left: A -> Z, apex Z, right: B -> Z)"""
    category: FinCategory = field(compare=False, repr=False)
    left: str
    apex: str
    right: str

    def __post_init__(self):
        C = self.category
        if C.cod(self.left) != self.apex or C.cod(self.right) != self.apex:
            raise EndpointMismatchError(
                f"cospan legs {self.left}, {self.right} do not both end at {self.apex}"
            )

    @property
    def source(self) -> str:
        return self.category.dom(self.left)

    @property
    def target(self) -> str:
        return self.category.dom(self.right)


def all_spans(C: FinCategory, a: str, b: str) -> list[Span]:
    """Every (a,b)-span, ordered by (apex, left, right)"""
    for obj in (a, b):
        if obj not in C.objects:
            raise UnknownObjectError(obj, C.name)
    spans = [
        Span(C, f, x, g)
        for x in C.objects
        for f in C.hom(x, a)
        for g in C.hom(x, b)
    ]
    return sorted(spans, key=lambda s: s.key)


def all_cospans(C: FinCategory, a: str, b: str) -> list[Cospan]:
    return [
        Cospan(C, h, z, k)
        for z in C.objects
        for h in C.hom(a, z)
        for k in C.hom(b, z)
    ]


def closes(span: Span, cospan: Cospan) -> bool:
    """hf = kg"""
    C = span.category
    return C.compose(span.left, cospan.left) == C.compose(span.right, cospan.right)


def signature(span: Span, cospans: Iterable[Cospan]) -> tuple[bool, ...]:
    """The cospans that close the span, as a boolean vector"""
    return tuple(closes(span, cospan) for cospan in cospans)


def _check_endpoints(s1: Span, s2: Span) -> None:
    if (s1.source, s1.target) != (s2.source, s2.target):
        raise EndpointMismatchError(
            f"spans go {s1.source}->{s1.target} and {s2.source}->{s2.target}"
        )


def spans_equivalent(s1: Span, s2: Span) -> bool:
    """Whether every (A,B)-cospan closes both spans or neither"""
    _check_endpoints(s1, s2)
    cospans = all_cospans(s1.category, s1.source, s1.target)
    return signature(s1, cospans) == signature(s2, cospans)


def postcompose(span: Span, m: str) -> Span:
    """(f, X, m∘g)"""
    C = span.category
    return Span(C, span.left, span.apex, C.compose(span.right, m))


@dataclass(frozen=True)
class ChoiceSet:
    """
    A choice set Σ_{A,B}

    One representative per equivalence class of (A,B)-spans, the
    lexicographically least (apex, left, right) of its class.
    """
    source: str
    target: str
    representatives: tuple[Span, ...]
    classes: tuple[tuple[Span, ...], ...]
    _by_signature: dict[tuple[bool, ...], Span] = field(repr=False, compare=False, hash=False)
    _cospans: tuple[Cospan, ...] = field(repr=False, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.representatives)

    def representative_of(self, span: Span) -> Span:
        if (span.source, span.target) != (self.source, self.target):
            raise EndpointMismatchError(
                f"span {span.key} is not a ({self.source},{self.target})-span"
            )
        return self._by_signature[signature(span, self._cospans)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "target": self.target,
            "size": len(self),
            "classes": [
                {
                    "representative": rep.to_dict(),
                    "members": [s.to_dict() for s in members],
                }
                for rep, members in zip(self.representatives, self.classes)
            ],
        }


def choice_set(C: FinCategory, a: str, b: str) -> ChoiceSet:
    """Quotient the (a,b)-spans by equivalence and pick representatives"""
    spans = all_spans(C, a, b)
    cospans = tuple(all_cospans(C, a, b))
    signatures = {span.key: signature(span, cospans) for span in spans}

    graph = nx.Graph()
    graph.add_nodes_from(signatures)
    for i, s1 in enumerate(spans):
        for s2 in spans[i + 1:]:
            if signatures[s1.key] == signatures[s2.key]:
                graph.add_edge(s1.key, s2.key)

    by_key = {span.key: span for span in spans}
    classes = sorted(
        (tuple(by_key[k] for k in sorted(component)) for component in nx.connected_components(graph)),
        key=lambda members: members[0].key,
    )
    representatives = tuple(members[0] for members in classes)
    by_signature = {signatures[rep.key]: rep for rep in representatives}

    logger.debug("choice_set_computed", category=C.name, source=a, target=b,
                 spans=len(spans), classes=len(classes))
    return ChoiceSet(
        source=a,
        target=b,
        representatives=representatives,
        classes=tuple(classes),
        _by_signature=by_signature,
        _cospans=cospans,
    )


@dataclass(frozen=True)
class IsbellReport:
    """Choice sets for every ordered pair of objects"""
    category: FinCategory
    choice_sets: dict[tuple[str, str], ChoiceSet]

    def sizes(self) -> dict[tuple[str, str], int]:
        return {pair: len(cs) for pair, cs in self.choice_sets.items()}

    def to_dict(self) -> dict[str, Any]:
        return {
            "category": self.category.name,
            "pairs": [cs.to_dict() for cs in self.choice_sets.values()],
        }


def isbell_report(C: FinCategory) -> IsbellReport:
    """
    Choice sets for all (A,B)

    Every finite category satisfies the Isbell condition; the report carries
    the witnessing choice sets.
    """
    choice_sets = {(a, b): choice_set(C, a, b) for a in C.objects for b in C.objects}
    logger.info("isbell_report_built", category=C.name, pairs=len(choice_sets),
                spans_kept=sum(len(cs) for cs in choice_sets.values()))
    return IsbellReport(C, choice_sets)


# ============= CONCRETIZATION =============

Tag = tuple[str, SpanKey]


def concretize(C: FinCategory) -> SetFunctor:
    """
    The faithful functor U: C -> finite sets built from choice sets

    U(B) is the disjoint union over A of the representatives of Σ_{A,B},
    tagged (A, representative). U(m: B -> B') sends the class of (f,X,g) to
    the representative of (f,X,m∘g).
    """
    report = isbell_report(C)
    carriers: dict[str, FinSetObj] = {}
    for b in C.objects:
        carriers[b] = FinSetObj(tuple(
            (a, rep.key)
            for a in C.objects
            for rep in report.choice_sets[(a, b)].representatives
        ))

    actions: dict[str, FinFn] = {}
    for m in C.morphism_ids:
        b, b2 = C.dom(m), C.cod(m)
        table: dict[Tag, Tag] = {}
        for a in C.objects:
            source_set = report.choice_sets[(a, b)]
            target_set = report.choice_sets[(a, b2)]
            for rep, members in zip(source_set.representatives, source_set.classes):
                image = target_set.representative_of(postcompose(rep, m))
                for member in members:
                    if target_set.representative_of(postcompose(member, m)) != image:
                        logger.error("concretize_not_well_defined", morphism=m, span=member.key)
                        raise InternalConsistencyError(
                            f"post-composition with {m} does not respect the class of {rep.key}"
                        )
                table[(a, rep.key)] = (a, image.key)
        actions[m] = FinFn.from_mapping(carriers[b], carriers[b2], table)

    functor = SetFunctor(source=C, objects=carriers, morphisms=actions)
    violations = set_functor_violations(functor)
    if violations:
        raise InternalConsistencyError(f"concretization of {C.name} is not a functor: {violations[0].message}")
    witness = faithfulness_witness(functor)
    if witness is not None:
        raise InternalConsistencyError(f"concretization of {C.name} identifies {witness}")
    logger.info("category_concretized", category=C.name,
                carrier_sizes={b: len(s) for b, s in carriers.items()})
    return functor
