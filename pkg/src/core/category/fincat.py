"""
Finite Categories

Abstract finite categories given by explicit composition tables, functors
between them, and exhaustive validation of the category axioms.

Composition is stored diagrammatically: compose(f, g) is "first f, then g",
i.e. g∘f, defined exactly when cod(f) = dom(g). Reports print both readings.
Morphism identity is nominal: two distinct ids are distinct morphisms even
if they behave alike.
"""
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Any, Iterable, Mapping, Optional, Protocol

import structlog

from ..errors import (
    LawViolationError,
    PartialityError,
    UndefinedIdError,
    UnknownObjectError,
    Violation,
)
from .finset import FinFn, FinSetObj, identity as set_identity, then

logger = structlog.get_logger()


@dataclass
class RawCategory:
    """Unvalidated composition-table data"""
    objects: list[str]
    morphisms: list[tuple[str, str, str]]  # (id, dom, cod)
    identity: dict[str, str]
    compose: dict[tuple[str, str], str]  # (first, second) -> second∘first
    name: str = "C"


@dataclass(frozen=True)
class FinCategory:
    """
    A sealed finite category

    Only produced by validate_category (or by constructions on already
    sealed categories); every instance satisfies the category axioms.
    """
    objects: tuple[str, ...]
    morphisms: tuple[tuple[str, str, str], ...]
    identities: tuple[tuple[str, str], ...]
    composites: tuple[tuple[str, str, str], ...]
    name: str = field(default="C", compare=False)

    _dom: dict[str, str] = field(init=False, repr=False, compare=False, hash=False)
    _cod: dict[str, str] = field(init=False, repr=False, compare=False, hash=False)
    _id: dict[str, str] = field(init=False, repr=False, compare=False, hash=False)
    _comp: dict[tuple[str, str], str] = field(init=False, repr=False, compare=False, hash=False)
    _hom: dict[tuple[str, str], tuple[str, ...]] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        object.__setattr__(self, "_dom", {m: d for m, d, _ in self.morphisms})
        object.__setattr__(self, "_cod", {m: c for m, _, c in self.morphisms})
        object.__setattr__(self, "_id", dict(self.identities))
        object.__setattr__(self, "_comp", {(f, g): h for f, g, h in self.composites})
        hom: dict[tuple[str, str], list[str]] = {(a, b): [] for a in self.objects for b in self.objects}
        for m, d, c in self.morphisms:
            hom[(d, c)].append(m)
        object.__setattr__(self, "_hom", {k: tuple(sorted(v)) for k, v in hom.items()})

    # ---- structure ----

    @property
    def morphism_ids(self) -> tuple[str, ...]:
        return tuple(m for m, _, _ in self.morphisms)

    def dom(self, m: str) -> str:
        return self._dom[m]

    def cod(self, m: str) -> str:
        return self._cod[m]

    def identity(self, obj: str) -> str:
        if obj not in self._id:
            raise UnknownObjectError(obj, self.name)
        return self._id[obj]

    def compose(self, first: str, second: str) -> str:
        """second∘first (diagrammatic order)"""
        return self._comp[(first, second)]

    def composable(self, first: str, second: str) -> bool:
        return (first, second) in self._comp

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        if (a, b) not in self._hom:
            raise UnknownObjectError(a if a not in self.objects else b, self.name)
        return self._hom[(a, b)]

    def is_identity(self, m: str) -> bool:
        return self._id.get(self._dom[m]) == m

    def inverses(self, m: str) -> list[str]:
        a, b = self._dom[m], self._cod[m]
        return [
            n for n in self.hom(b, a)
            if self.compose(m, n) == self._id[a] and self.compose(n, m) == self._id[b]
        ]

    def is_iso(self, m: str) -> bool:
        return bool(self.inverses(m))

    def describe_composite(self, first: str, second: str) -> str:
        """Both readings, to keep ∘-direction explicit in reports"""
        return f"{first};{second} = {second}∘{first} = {self.compose(first, second)}"


def hom(C: FinCategory, a: str, b: str) -> list[str]:
    """Morphisms a -> b in ascending id order"""
    for obj in (a, b):
        if obj not in C.objects:
            raise UnknownObjectError(obj, C.name)
    return list(C.hom(a, b))


# ============= VALIDATION =============

def _undefined_references(raw: RawCategory) -> Optional[UndefinedIdError]:
    objects = set(raw.objects)
    morphisms = {m for m, _, _ in raw.morphisms}
    for m, d, c in raw.morphisms:
        for ref in (d, c):
            if ref not in objects:
                return UndefinedIdError(ref, f"morphism {m}")
    for obj, m in raw.identity.items():
        if obj not in objects:
            return UndefinedIdError(obj, "identity table")
        if m not in morphisms:
            return UndefinedIdError(m, f"identity of {obj}")
    for (f, g), h in raw.compose.items():
        for ref in (f, g, h):
            if ref not in morphisms:
                return UndefinedIdError(ref, f"composite ({f}, {g})")
    return None


def _partiality_violations(raw: RawCategory) -> list[Violation]:
    dom = {m: d for m, d, _ in raw.morphisms}
    cod = {m: c for m, _, c in raw.morphisms}
    violations = []
    for (f, g) in raw.compose:
        if cod[f] != dom[g]:
            violations.append(Violation(
                law="partiality",
                message=f"compose({f}, {g}) defined but cod({f})={cod[f]} != dom({g})={dom[g]}",
                witness={"first": f, "second": g},
            ))
    for f, _, _ in raw.morphisms:
        for g, _, _ in raw.morphisms:
            if cod[f] == dom[g] and (f, g) not in raw.compose:
                violations.append(Violation(
                    law="partiality",
                    message=f"compose({f}, {g}) undefined on a composable pair",
                    witness={"first": f, "second": g},
                ))
    return violations


def _law_violations(raw: RawCategory) -> list[Violation]:
    dom = {m: d for m, d, _ in raw.morphisms}
    cod = {m: c for m, _, c in raw.morphisms}
    violations: list[Violation] = []

    seen: set[str] = set()
    for m, _, _ in raw.morphisms:
        if m in seen:
            violations.append(Violation("distinct_ids", f"morphism id {m} declared twice", {"morphism": m}))
        seen.add(m)
    if len(set(raw.objects)) != len(raw.objects):
        violations.append(Violation("distinct_ids", "object declared twice", {}))

    for obj in raw.objects:
        m = raw.identity.get(obj)
        if m is None:
            violations.append(Violation("identity", f"object {obj} has no identity", {"object": obj}))
        elif dom[m] != obj or cod[m] != obj:
            violations.append(Violation(
                "identity", f"identity {m} of {obj} is not an endomorphism of {obj}",
                {"object": obj, "morphism": m},
            ))

    for (f, g), h in raw.compose.items():
        if dom[h] != dom[f] or cod[h] != cod[g]:
            violations.append(Violation(
                "composite_typing",
                f"{g}∘{f} = {h} has type {dom[h]}->{cod[h]}, expected {dom[f]}->{cod[g]}",
                {"first": f, "second": g, "result": h},
            ))

    for f, d, c in raw.morphisms:
        left = raw.identity.get(d)
        right = raw.identity.get(c)
        if left is not None and raw.compose.get((left, f)) != f:
            violations.append(Violation(
                "left_unit", f"{f}∘id_{d} = {raw.compose.get((left, f))} != {f}",
                {"morphism": f, "identity": left},
            ))
        if right is not None and raw.compose.get((f, right)) != f:
            violations.append(Violation(
                "right_unit", f"id_{c}∘{f} = {raw.compose.get((f, right))} != {f}",
                {"morphism": f, "identity": right},
            ))

    for (f, g), fg in raw.compose.items():
        for (g2, h), gh in raw.compose.items():
            if g2 != g:
                continue
            lhs = raw.compose.get((fg, h))
            rhs = raw.compose.get((f, gh))
            if lhs != rhs:
                violations.append(Violation(
                    "associativity",
                    f"({h}∘{g})∘{f} = {rhs} but {h}∘({g}∘{f}) = {lhs}",
                    {"f": f, "g": g, "h": h, "left": lhs, "right": rhs},
                ))
    return violations


def category_violations(raw: RawCategory) -> list[Violation]:
    """Every violated law, without raising"""
    undefined = _undefined_references(raw)
    if undefined is not None:
        return [Violation("undefined_id", str(undefined), {"id": undefined.identifier})]
    return _partiality_violations(raw) + _law_violations(raw)


def validate_category(raw: RawCategory) -> FinCategory:
    """
    Seal a composition table as a FinCategory

    Raises UndefinedIdError for dangling references, PartialityError when
    compose is defined on a non-composable pair (or missing on a composable
    one) and LawViolationError for identity, typing and associativity
    failures, each with witnesses.
    """
    undefined = _undefined_references(raw)
    if undefined is not None:
        raise undefined
    partial = _partiality_violations(raw)
    if partial:
        raise PartialityError(partial)
    violations = _law_violations(raw)
    if violations:
        logger.warning("category_rejected", category=raw.name, violations=len(violations))
        raise LawViolationError(f"category {raw.name}", violations)

    category = FinCategory(
        objects=tuple(raw.objects),
        morphisms=tuple(sorted(raw.morphisms)),
        identities=tuple(sorted(raw.identity.items())),
        composites=tuple(sorted((f, g, h) for (f, g), h in raw.compose.items())),
        name=raw.name,
    )
    logger.debug(
        "category_sealed",
        category=raw.name,
        objects=len(category.objects),
        morphisms=len(category.morphisms),
    )
    return category


def to_raw(C: FinCategory) -> RawCategory:
    return RawCategory(
        objects=list(C.objects),
        morphisms=list(C.morphisms),
        identity=dict(C.identities),
        compose={(f, g): h for f, g, h in C.composites},
        name=C.name,
    )


def opposite(C: FinCategory) -> FinCategory:
    """C^op: dom/cod swapped, composition reversed"""
    return FinCategory(
        objects=C.objects,
        morphisms=tuple(sorted((m, c, d) for m, d, c in C.morphisms)),
        identities=C.identities,
        composites=tuple(sorted((g, f, h) for f, g, h in C.composites)),
        name=f"{C.name}^op",
    )


# ============= FUNCTORS =============

class Functorial(Protocol):
    source: FinCategory

    def map_morphism(self, m: str) -> Any: ...


@dataclass(frozen=True)
class FinFunctor:
    """A functor between finite categories, stored as two tables"""
    source: FinCategory
    target: FinCategory
    obj_map: tuple[tuple[str, str], ...]
    mor_map: tuple[tuple[str, str], ...]

    _obj: dict[str, str] = field(init=False, repr=False, compare=False, hash=False)
    _mor: dict[str, str] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_obj", dict(self.obj_map))
        object.__setattr__(self, "_mor", dict(self.mor_map))

    def map_object(self, obj: str) -> str:
        return self._obj[obj]

    def map_morphism(self, m: str) -> str:
        return self._mor[m]


def functor_violations(
    source: FinCategory,
    target: FinCategory,
    obj_map: Mapping[str, str],
    mor_map: Mapping[str, str],
) -> list[Violation]:
    violations = []
    for obj in source.objects:
        if obj_map.get(obj) not in target.objects:
            violations.append(Violation("object_map", f"{obj} has no image", {"object": obj}))
    for m in source.morphism_ids:
        if mor_map.get(m) not in target.morphism_ids:
            violations.append(Violation("morphism_map", f"{m} has no image", {"morphism": m}))
    if violations:
        return violations
    for m in source.morphism_ids:
        image = mor_map[m]
        if target.dom(image) != obj_map[source.dom(m)] or target.cod(image) != obj_map[source.cod(m)]:
            violations.append(Violation("preserves_typing", f"F({m}) = {image} has the wrong type", {"morphism": m}))
    for obj in source.objects:
        if mor_map[source.identity(obj)] != target.identity(obj_map[obj]):
            violations.append(Violation("preserves_identity", f"F(id_{obj}) is not an identity", {"object": obj}))
    for f, g, h in source.composites:
        if target.composable(mor_map[f], mor_map[g]) and target.compose(mor_map[f], mor_map[g]) == mor_map[h]:
            continue
        violations.append(Violation(
            "preserves_composition",
            f"F does not preserve {source.describe_composite(f, g)}",
            {"first": f, "second": g},
        ))
    return violations


def validate_functor(
    source: FinCategory,
    target: FinCategory,
    obj_map: Mapping[str, str],
    mor_map: Mapping[str, str],
) -> FinFunctor:
    violations = functor_violations(source, target, obj_map, mor_map)
    if violations:
        raise LawViolationError(f"functor {source.name} -> {target.name}", violations)
    return FinFunctor(
        source=source,
        target=target,
        obj_map=tuple(sorted(obj_map.items())),
        mor_map=tuple(sorted(mor_map.items())),
    )


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor(
        source=C,
        target=C,
        obj_map=tuple((o, o) for o in C.objects),
        mor_map=tuple((m, m) for m in C.morphism_ids),
    )


@dataclass(frozen=True)
class SetFunctor:
    """A functor from a finite category into finite sets"""
    source: FinCategory
    objects: Mapping[str, FinSetObj]
    morphisms: Mapping[str, FinFn]

    def map_object(self, obj: str) -> FinSetObj:
        return self.objects[obj]

    def map_morphism(self, m: str) -> FinFn:
        return self.morphisms[m]


def set_functor_violations(F: SetFunctor) -> list[Violation]:
    C = F.source
    violations = []
    for m in C.morphism_ids:
        image = F.morphisms[m]
        if image.dom != F.objects[C.dom(m)] or image.cod != F.objects[C.cod(m)]:
            violations.append(Violation("preserves_typing", f"U({m}) has the wrong type", {"morphism": m}))
    if violations:
        return violations
    for obj in C.objects:
        if F.morphisms[C.identity(obj)] != set_identity(F.objects[obj]):
            violations.append(Violation("preserves_identity", f"U(id_{obj}) is not an identity", {"object": obj}))
    for f, g, h in C.composites:
        if then(F.morphisms[f], F.morphisms[g]) != F.morphisms[h]:
            violations.append(Violation(
                "preserves_composition",
                f"U does not preserve {C.describe_composite(f, g)}",
                {"first": f, "second": g},
            ))
    return violations


def is_faithful(F: Functorial) -> bool:
    """
    Whether F is injective on every hom-set

    Exhaustive over parallel pairs of the source.
    """
    C = F.source
    for a, b in cartesian(C.objects, repeat=2):
        images = [F.map_morphism(m) for m in C.hom(a, b)]
        if len(set(images)) != len(images):
            return False
    return True


def faithfulness_witness(F: Functorial) -> Optional[tuple[str, str]]:
    """A parallel pair identified by F, if any"""
    C = F.source
    for a, b in cartesian(C.objects, repeat=2):
        seen: dict[Any, str] = {}
        for m in C.hom(a, b):
            image = F.map_morphism(m)
            if image in seen:
                return seen[image], m
            seen[image] = m
    return None


# ============= PULLBACKS IN FINITE CATEGORIES =============

@dataclass(frozen=True)
class CategoryPullback:
    apex: str
    p1: str
    p2: str


def _cones(C: FinCategory, f: str, g: str) -> list[tuple[str, str, str]]:
    x, y = C.dom(f), C.dom(g)
    return [
        (q, q1, q2)
        for q in C.objects
        for q1 in C.hom(q, x)
        for q2 in C.hom(q, y)
        if C.compose(q1, f) == C.compose(q2, g)
    ]


def _is_universal(C: FinCategory, cones: list[tuple[str, str, str]], p1: str, p2: str) -> bool:
    p = C.dom(p1)
    for q, q1, q2 in cones:
        mediators = [
            m for m in C.hom(q, p)
            if C.compose(m, p1) == q1 and C.compose(m, p2) == q2
        ]
        if len(mediators) != 1:
            return False
    return True


def is_pullback_cone(C: FinCategory, f: str, g: str, p1: str, p2: str) -> bool:
    """Whether (p1, p2) is a pullback of the cospan (f, g)"""
    if C.dom(p1) != C.dom(p2) or C.cod(p1) != C.dom(f) or C.cod(p2) != C.dom(g):
        return False
    if C.compose(p1, f) != C.compose(p2, g):
        return False
    return _is_universal(C, _cones(C, f, g), p1, p2)


def find_pullback(C: FinCategory, f: str, g: str) -> Optional[CategoryPullback]:
    """
    A pullback of the cospan f: X -> Z <- Y: g, by exhaustive search

    Returns the first cone (in object/id order) that satisfies the universal
    property, or None.
    """
    if C.cod(f) != C.cod(g):
        raise UnknownObjectError(C.cod(g), f"cospan ({f}, {g})")
    cones = _cones(C, f, g)
    for p, p1, p2 in cones:
        if _is_universal(C, cones, p1, p2):
            return CategoryPullback(p, p1, p2)
    return None


def cospans(C: FinCategory) -> Iterable[tuple[str, str]]:
    for f in C.morphism_ids:
        for g in C.morphism_ids:
            if C.cod(f) == C.cod(g):
                yield f, g


def missing_pullbacks(C: FinCategory) -> list[tuple[str, str]]:
    return [(f, g) for f, g in cospans(C) if find_pullback(C, f, g) is None]
