"""
Internal Categories in Finite Sets

A small category presented as a 6-tuple (C0, C1, d0, d1, c, i) of finite
sets and functions. c is defined on the pullback C1 ×_{C0} C1 of d0 along
d1, whose elements are pairs (g, f) with d0 g = d1 f; c(g, f) is g∘f.

An internal diagram (p: F -> C0, q: C1 ×_{C0} F -> F) is a category action:
q is defined on pairs (f, a) with d0 f = p a, and f·a = q(f, a).
"""
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Any, Hashable, Optional

import structlog

from ..category.fincat import FinCategory, RawCategory, validate_category
from ..category.finset import FinFn, FinSetObj, Pullback, pullback, then
from ..errors import (
    InternalConsistencyError,
    LawViolationError,
    NotComposableError,
    PartialityError,
    UndefinedIdError,
    Violation,
)

logger = structlog.get_logger()

Element = Hashable


@dataclass
class RawInternalCategory:
    """Unvalidated tables; c is keyed by (g, f) and holds g∘f"""
    C0: list[Element]
    C1: list[Element]
    d0: dict[Element, Element]
    d1: dict[Element, Element]
    c: dict[tuple[Element, Element], Element]
    i: dict[Element, Element]
    name: str = "C"


@dataclass(frozen=True)
class InternalCategory:
    C0: FinSetObj
    C1: FinSetObj
    d0: FinFn
    d1: FinFn
    c: FinFn
    i: FinFn
    name: str = field(default="C", compare=False)

    @property
    def composable(self) -> Pullback:
        """C1 ×_{C0} C1: pairs (g, f) with d0 g = d1 f"""
        return pullback(self.d0, self.d1)

    def compose_elements(self, g: Element, f: Element) -> Element:
        """g∘f"""
        if self.d0(g) != self.d1(f):
            raise NotComposableError(f"{g}∘{f}: d0({g}) = {self.d0(g)} but d1({f}) = {self.d1(f)}")
        return self.c((g, f))

    def then(self, f: Element, g: Element) -> Element:
        """Diagrammatic g∘f"""
        return self.compose_elements(g, f)

    def hom_elements(self, x: Element, y: Element) -> list[Element]:
        return [f for f in self.C1 if self.d0(f) == x and self.d1(f) == y]

    def inverse_elements(self, f: Element) -> list[Element]:
        x, y = self.d0(f), self.d1(f)
        return [
            g for g in self.hom_elements(y, x)
            if self.c((g, f)) == self.i(x) and self.c((f, g)) == self.i(y)
        ]

    def is_iso_element(self, f: Element) -> bool:
        return bool(self.inverse_elements(f))


# ============= VALIDATION =============

def _undefined(raw: RawInternalCategory) -> Optional[UndefinedIdError]:
    objects, morphisms = set(raw.C0), set(raw.C1)
    for table, keys, values in (
        ("d0", morphisms, objects),
        ("d1", morphisms, objects),
        ("i", objects, morphisms),
    ):
        for key, value in getattr(raw, table).items():
            if key not in keys:
                return UndefinedIdError(str(key), f"{table} of {raw.name}")
            if value not in values:
                return UndefinedIdError(str(value), f"{table}({key}) of {raw.name}")
    for (g, f), h in raw.c.items():
        for ref in (g, f, h):
            if ref not in morphisms:
                return UndefinedIdError(str(ref), f"c({g}, {f}) of {raw.name}")
    return None


def _seal(raw: RawInternalCategory) -> InternalCategory:
    """Build the value tables; partial d0/d1/i/c raise PartialityError"""
    C0 = FinSetObj.of(raw.C0)
    C1 = FinSetObj.of(raw.C1)
    d0 = FinFn.from_mapping(C1, C0, raw.d0)
    d1 = FinFn.from_mapping(C1, C0, raw.d1)
    i = FinFn.from_mapping(C0, C1, raw.i)
    composable = pullback(d0, d1)

    partial = [
        Violation("partiality", f"c({g}, {f}) defined but d0({g}) != d1({f})", {"g": g, "f": f})
        for (g, f) in raw.c
        if (g, f) not in composable.apex
    ]
    partial += [
        Violation("partiality", f"c undefined on the composable pair ({g}, {f})", {"g": g, "f": f})
        for (g, f) in composable.apex
        if (g, f) not in raw.c
    ]
    if partial:
        raise PartialityError(partial)
    c = FinFn.from_mapping(composable.apex, C1, raw.c)
    return InternalCategory(C0=C0, C1=C1, d0=d0, d1=d1, c=c, i=i, name=raw.name)


def law_violations(C: InternalCategory) -> list[Violation]:
    violations = []
    for x in C.C0:
        e = C.i(x)
        if C.d0(e) != x:
            violations.append(Violation("identity_source", f"d0(i({x})) = {C.d0(e)}", {"object": x}))
        if C.d1(e) != x:
            violations.append(Violation("identity_target", f"d1(i({x})) = {C.d1(e)}", {"object": x}))
    if violations:
        return violations

    for g, f in C.composable.apex:
        h = C.c((g, f))
        if C.d0(h) != C.d0(f) or C.d1(h) != C.d1(g):
            violations.append(Violation(
                "composite_typing", f"c({g}, {f}) = {h} has the wrong endpoints", {"g": g, "f": f, "h": h},
            ))
    if violations:
        return violations

    for f in C.C1:
        left = C.c((C.i(C.d1(f)), f))
        right = C.c((f, C.i(C.d0(f))))
        if left != f:
            violations.append(Violation("left_unit", f"i(d1 {f})∘{f} = {left}", {"morphism": f}))
        if right != f:
            violations.append(Violation("right_unit", f"{f}∘i(d0 {f}) = {right}", {"morphism": f}))

    for h, g in C.composable.apex:
        for g2, f in C.composable.apex:
            if g2 != g:
                continue
            lhs = C.c((h, C.c((g, f))))
            rhs = C.c((C.c((h, g)), f))
            if lhs != rhs:
                violations.append(Violation(
                    "associativity", f"{h}∘({g}∘{f}) = {lhs} but ({h}∘{g})∘{f} = {rhs}",
                    {"h": h, "g": g, "f": f},
                ))
    return violations


def internal_category_violations(raw: RawInternalCategory) -> list[Violation]:
    """Every violated law without raising; malformed tables still raise"""
    undefined = _undefined(raw)
    if undefined is not None:
        raise undefined
    return law_violations(_seal(raw))


def validate_internal_category(raw: RawInternalCategory) -> InternalCategory:
    """
    Seal an internal category

    UndefinedIdError for dangling elements, PartialityError when a table is
    not total (c must be defined on exactly the composable pairs) and
    LawViolationError naming every violated law with element witnesses.
    """
    undefined = _undefined(raw)
    if undefined is not None:
        raise undefined
    C = _seal(raw)
    violations = law_violations(C)
    if violations:
        logger.warning("internal_category_rejected", category=raw.name, violations=len(violations))
        raise LawViolationError(f"internal category {raw.name}", violations)
    logger.debug("internal_category_sealed", category=raw.name, objects=len(C.C0), morphisms=len(C.C1))
    return C


def internalize(C: FinCategory) -> InternalCategory:
    """The 6-tuple of a finite category: C0 its objects, C1 its morphism ids"""
    return validate_internal_category(RawInternalCategory(
        C0=list(C.objects),
        C1=list(C.morphism_ids),
        d0={m: C.dom(m) for m in C.morphism_ids},
        d1={m: C.cod(m) for m in C.morphism_ids},
        c={(g, f): h for f, g, h in C.composites},
        i=dict(C.identities),
        name=C.name,
    ))


def externalize_points(C: InternalCategory) -> FinCategory:
    """Read an internal category back as a FinCategory (element labels as ids)"""
    return validate_category(RawCategory(
        objects=[str(x) for x in C.C0],
        morphisms=[(str(f), str(C.d0(f)), str(C.d1(f))) for f in C.C1],
        identity={str(x): str(C.i(x)) for x in C.C0},
        compose={(str(f), str(g)): str(C.c((g, f))) for g, f in C.composable.apex},
        name=C.name,
    ))


# ============= INTERNAL DIAGRAMS =============

@dataclass(frozen=True)
class InternalDiagram:
    category: InternalCategory = field(repr=False)
    F: FinSetObj
    p: FinFn
    q: FinFn


def diagram_violations(C: InternalCategory, F: FinSetObj, p: FinFn, q: FinFn) -> list[Violation]:
    """
    The three action identities as table equalities

    1. p(f·a) = d1 f
    2. i(p a)·a = a
    3. g·(f·a) = (g∘f)·a on the triples (g, (f, a)) with d0 g = d1 f
    """
    domain = pullback(C.d0, p)
    if p.dom != F or p.cod != C.C0:
        return [Violation("shape", "p must go F -> C0", {})]
    if q.dom != domain.apex or q.cod != F:
        return [Violation("shape", "q must go C1 ×_{C0} F -> F", {})]

    violations = []
    for f, a in domain.apex:
        if p(q((f, a))) != C.d1(f):
            violations.append(Violation("action_target", f"p({f}·{a}) != d1({f})", {"f": f, "a": a}))
    for a in F:
        if q((C.i(p(a)), a)) != a:
            violations.append(Violation("action_unit", f"i(p {a})·{a} != {a}", {"a": a}))
    if violations:
        return violations

    triples = pullback(C.d0, then(domain.p1, C.d1))
    for g, (f, a) in triples.apex:
        lhs = q((g, q((f, a))))
        rhs = q((C.c((g, f)), a))
        if lhs != rhs:
            violations.append(Violation(
                "action_composition", f"{g}·({f}·{a}) = {lhs} but ({g}∘{f})·{a} = {rhs}",
                {"g": g, "f": f, "a": a},
            ))
    return violations


def validate_internal_diagram(C: InternalCategory, F: FinSetObj, p: FinFn, q: FinFn) -> InternalDiagram:
    violations = diagram_violations(C, F, p, q)
    if violations:
        raise LawViolationError(f"internal diagram on {C.name}", violations)
    return InternalDiagram(C, F, p, q)


def act(D: InternalDiagram, f: Element, a: Element) -> Element:
    """f·a = q(f, a)"""
    C = D.category
    if C.d0(f) != D.p(a):
        raise NotComposableError(f"{f}·{a}: d0({f}) = {C.d0(f)} but p({a}) = {D.p(a)}")
    return D.q((f, a))


def _parallel_pairs(C: InternalCategory) -> list[tuple[Element, Element]]:
    return [
        (f, g)
        for f in C.C1
        for g in C.C1
        if f != g and C.d0(f) == C.d0(g) and C.d1(f) == C.d1(g)
    ]


def faithfulness_counterexample(C: InternalCategory, D: InternalDiagram) -> Optional[dict[str, Any]]:
    """A pair of distinct parallel elements that act identically, if any"""
    for f, g in _parallel_pairs(C):
        if all(act(D, f, a) == act(D, g, a) for a in D.F if D.p(a) == C.d0(f)):
            return {"f": f, "g": g}
    return None


def is_faithful_diagram(C: InternalCategory, D: InternalDiagram) -> bool:
    """
    Faithfulness at singleton stages

    Finite sets are well-pointed, so testing f·a = g·a against single
    elements a decides the condition for generalized elements whenever
    every fiber of p over a domain in play is inhabited.
    """
    return faithfulness_counterexample(C, D) is None


def is_faithful_diagram_at_stage(C: InternalCategory, D: InternalDiagram, n: int) -> bool:
    """
    Faithfulness for generalized elements f, g: I -> C1, a: I -> F with |I| = n

    f, g parallel pointwise; if f·a = g·a for every a with p∘a = d0∘f then
    f = g.
    """
    for f in cartesian(C.C1.elements, repeat=n):
        for g in cartesian(C.C1.elements, repeat=n):
            if f == g:
                continue
            if any(C.d0(x) != C.d0(y) or C.d1(x) != C.d1(y) for x, y in zip(f, g)):
                continue
            fibers = [[a for a in D.F if D.p(a) == C.d0(x)] for x in f]
            separated = False
            for a in cartesian(*fibers):
                if any(D.q((x, ai)) != D.q((y, ai)) for x, y, ai in zip(f, g, a)):
                    separated = True
                    break
            if not separated:
                return False
    return True


def canonical_faithful_diagram(C: InternalCategory) -> InternalDiagram:
    """
    F = C1, p = d1, q = c

    The action domain pullback(d0, d1) is exactly the domain of c, and
    f·a = f∘a acts by post-composition.
    """
    D = validate_internal_diagram(C, C.C1, C.d1, C.c)
    witness = faithfulness_counterexample(C, D)
    if witness is not None:
        logger.error("canonical_diagram_not_faithful", category=C.name, **{k: str(v) for k, v in witness.items()})
        raise InternalConsistencyError(f"canonical diagram on {C.name} identifies {witness}")
    return D


def terminal_diagram(C: InternalCategory) -> InternalDiagram:
    """F = C0, p = id, f·x = d1 f; faithful only when C is thin"""
    domain = pullback(C.d0, FinFn(C.C0, C.C0, C.C0.elements))
    q = FinFn(domain.apex, C.C0, tuple(C.d1(f) for f, _ in domain.apex))
    return validate_internal_diagram(C, C.C0, FinFn(C.C0, C.C0, C.C0.elements), q)
