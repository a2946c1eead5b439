"""
Externalization: Fam(C) over Finite Sets

Objects over a set I are families X: I -> C0. A morphism (I,X) -> (J,Y) is
a pair (u, f) with u: I -> J and f: I -> C1 such that d0∘f = X and
d1∘f = Y∘u, i.e. f(i): X(i) -> Y(u(i)).

    composition   (u, f) then (v, g) = (v∘u, c∘<g∘u, f>)
    identity      (id_I, i∘X)
    lift          (u, i∘Y∘u): (I, Y∘u) -> (J, Y)

A morphism is cartesian iff every component f(i) is an isomorphism of C.
"""
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Any, Iterator, Optional

import structlog

from ..category.fincat import FinCategory, RawCategory, validate_category
from ..category.finset import FinFn, FinSetObj, all_functions, canonical, identity, then
from ..category.universe import FinSetUniverse
from ..errors import CodomainMismatchError, NotComposableError, ShapeMismatchError
from ..fibration.base import ComputedFibration
from .internal_category import InternalCategory

logger = structlog.get_logger()


@dataclass(frozen=True)
class FamObject:
    """An I-indexed family of objects of C"""
    index: FinSetObj
    family: FinFn

    def __post_init__(self):
        if self.family.dom != self.index:
            raise ShapeMismatchError(f"family is indexed by {self.family.dom!r}, not {self.index!r}")

    def __getitem__(self, i: Any) -> Any:
        return self.family(i)

    def to_dict(self) -> dict[str, Any]:
        return {"index": list(self.index.elements), "family": list(self.family.values)}


@dataclass(frozen=True)
class FamMorphism:
    """(u, f): (I, X) -> (J, Y), checked at construction"""
    category: InternalCategory = field(compare=False, repr=False)
    source: FamObject
    target: FamObject
    u: FinFn
    f: FinFn

    def __post_init__(self):
        C = self.category
        if self.u.dom != self.source.index or self.u.cod != self.target.index:
            raise ShapeMismatchError("u must go from the source index to the target index")
        if self.f.dom != self.source.index or self.f.cod != C.C1:
            raise ShapeMismatchError("f must go from the source index into C1")
        if self.source.family.cod != C.C0 or self.target.family.cod != C.C0:
            raise CodomainMismatchError(f"families must land in the objects of {C.name}")
        if then(self.f, C.d0) != self.source.family:
            raise CodomainMismatchError("d0∘f differs from the source family")
        if then(self.f, C.d1) != then(self.u, self.target.family):
            raise CodomainMismatchError("d1∘f differs from the reindexed target family")

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "u": list(self.u.values),
            "f": list(self.f.values),
        }


def family(C: InternalCategory, index: FinSetObj, values: Any) -> FamObject:
    """Convenience: the family i ↦ values[k] for the k-th element of index"""
    return FamObject(index, FinFn(index, C.C0, tuple(values)))


def fam_compose(first: FamMorphism, second: FamMorphism) -> FamMorphism:
    """(u, f) then (v, g) = (v∘u, c∘<g∘u, f>)"""
    if first.target != second.source:
        raise NotComposableError("codomain of the first family morphism is not the domain of the second")
    C = first.category
    g_after_u = then(first.u, second.f)
    composite = FinFn(
        first.source.index,
        C.C1,
        tuple(C.c((g_after_u(i), first.f(i))) for i in first.source.index),
    )
    return FamMorphism(C, first.source, second.target, then(first.u, second.u), composite)


def fam_identity(C: InternalCategory, X: FamObject) -> FamMorphism:
    """(id_I, i∘X)"""
    return FamMorphism(C, X, X, identity(X.index), then(X.family, C.i))


def reindex_family(Y: FamObject, u: FinFn) -> FamObject:
    """u*Y = (I, Y∘u)"""
    return FamObject(u.dom, then(u, Y.family))


def fam_cartesian_lift(C: InternalCategory, Y: FamObject, u: FinFn) -> FamMorphism:
    """(u, i∘Y∘u): (I, Y∘u) -> (J, Y)"""
    if u.cod != Y.index:
        raise CodomainMismatchError(f"cannot reindex a family over {Y.index!r} along a map into {u.cod!r}")
    source = reindex_family(Y, u)
    return FamMorphism(C, source, Y, u, then(source.family, C.i))


def fam_hom_over(C: InternalCategory, X: FamObject, Y: FamObject, u: FinFn) -> Iterator[FamMorphism]:
    """Every (u, f): X -> Y for a fixed u, componentwise in C1 order"""
    if u.dom != X.index or u.cod != Y.index:
        return
    components = [C.hom_elements(X[i], Y[u(i)]) for i in X.index]
    for values in cartesian(*components):
        yield FamMorphism(C, X, Y, u, FinFn(X.index, C.C1, values))


def hom_enumerate(C: InternalCategory, X: FamObject, Y: FamObject) -> list[FamMorphism]:
    """All family morphisms X -> Y: u in value-table order, then f"""
    return [m for u in all_functions(X.index, Y.index) for m in fam_hom_over(C, X, Y, u)]


class Externalization(ComputedFibration):
    """proj: Fam(C) -> FinSet, the base bounded by the universe"""

    def __init__(self, category: InternalCategory, universe: FinSetUniverse):
        self.category = category
        self.base = universe
        self.name = f"Fam({category.name})"

    def objects_over(self, I: FinSetObj) -> Iterator[FamObject]:
        for X in all_functions(I, self.category.C0):
            yield FamObject(I, X)

    def hom_over(self, X: FamObject, Y: FamObject, u: FinFn) -> Iterator[FamMorphism]:
        return fam_hom_over(self.category, X, Y, u)

    def compose(self, first: FamMorphism, second: FamMorphism) -> FamMorphism:
        return fam_compose(first, second)

    def identity(self, X: FamObject) -> FamMorphism:
        return fam_identity(self.category, X)

    def project_object(self, X: FamObject) -> FinSetObj:
        return X.index

    def project(self, m: FamMorphism) -> FinFn:
        return m.u

    def dom(self, m: FamMorphism) -> FamObject:
        return m.source

    def cod(self, m: FamMorphism) -> FamObject:
        return m.target

    def exact_cartesian(self, m: FamMorphism) -> Optional[bool]:
        return all(self.category.is_iso_element(x) for x in m.f.values)

    def chosen_lift(self, Y: FamObject, u: FinFn) -> FamMorphism:
        return fam_cartesian_lift(self.category, Y, u)

    def is_vertical_iso(self, m: FamMorphism) -> bool:
        return self.is_vertical(m) and bool(self.exact_cartesian(m))

    def label_object(self, X: FamObject) -> dict[str, Any]:
        return X.to_dict()

    def label_morphism(self, m: FamMorphism) -> dict[str, Any]:
        return m.to_dict()


def externalize(C: InternalCategory, bound: int) -> Externalization:
    """Fam(C) as a computed fibration over finite sets of size <= bound"""
    logger.debug("externalized", category=C.name, bound=bound)
    return Externalization(C, FinSetUniverse(bound))


def point_category(E: Externalization) -> FinCategory:
    """
    The 1-indexed families of Fam(C) and the morphisms over id_1

    Isomorphic to C itself; with string element labels, equal to
    externalize_points of the underlying internal category.
    """
    C = E.category
    point = canonical(1)
    objects = {x: family(C, point, (x,)) for x in C.C0}
    over = identity(point)
    morphisms = {}
    for x, X in objects.items():
        for y, Y in objects.items():
            for m in fam_hom_over(C, X, Y, over):
                morphisms[str(m.f(0))] = (m, str(x), str(y))
    compose = {}
    for f_id, (m1, _, f_cod) in morphisms.items():
        for g_id, (m2, g_dom, _) in morphisms.items():
            if f_cod == g_dom:
                compose[(f_id, g_id)] = str(fam_compose(m1, m2).f(0))
    return validate_category(RawCategory(
        objects=[str(x) for x in C.C0],
        morphisms=[(m_id, d, c) for m_id, (_, d, c) in morphisms.items()],
        identity={str(x): str(fam_identity(C, X).f(0)) for x, X in objects.items()},
        compose=compose,
        name=C.name,
    ))
