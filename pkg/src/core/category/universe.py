"""
Finite-Set Universes

The category of finite sets is infinite, so quantifiers over "every index
set" range over a universe of canonical sets {0..n-1} with n <= bound.
FinSetUniverse is that universe as a lazily enumerated base category;
finset_category tabulates the same universe as a sealed FinCategory.
"""
from dataclasses import dataclass
from typing import Iterator, Optional

import structlog

from .fincat import FinCategory, RawCategory, validate_category
from .finset import FinFn, FinSetObj, all_functions, canonical, identity, then

logger = structlog.get_logger()


@dataclass(frozen=True)
class FinSetUniverse:
    """Finite sets of cardinality <= bound, with all functions"""
    bound: int
    exact: bool = False

    def objects(self, bound: Optional[int] = None) -> Iterator[FinSetObj]:
        limit = self.bound if bound is None else bound
        for size in range(limit + 1):
            yield canonical(size)

    def hom(self, a: FinSetObj, b: FinSetObj) -> Iterator[FinFn]:
        return all_functions(a, b)

    def compose(self, first: FinFn, second: FinFn) -> FinFn:
        return then(first, second)

    def identity(self, a: FinSetObj) -> FinFn:
        return identity(a)

    def dom(self, m: FinFn) -> FinSetObj:
        return m.dom

    def cod(self, m: FinFn) -> FinSetObj:
        return m.cod

    def is_identity(self, m: FinFn) -> bool:
        return m.dom == m.cod and m.values == m.dom.elements

    def stages(self, a: FinSetObj) -> Iterator[FinFn]:
        """Points 1 -> a; reindexing along them detects every stable property"""
        point = canonical(1)
        for element in a:
            yield FinFn(point, a, (element,))

    def exceeds_bound(self, a: FinSetObj) -> bool:
        return len(a) > self.bound

    def label_object(self, a: FinSetObj) -> str:
        return repr(a)

    def label_morphism(self, m: FinFn) -> str:
        return repr(m)


@dataclass(frozen=True)
class TabulatedSets:
    """finset_category output: the category plus the function behind each id"""
    category: FinCategory
    functions: dict[str, FinFn]
    sets: dict[str, FinSetObj]

    def function(self, m: str) -> FinFn:
        return self.functions[m]

    def id_of(self, fn: FinFn) -> str:
        for m, candidate in self.functions.items():
            if candidate == fn:
                return m
        raise KeyError(repr(fn))


def _function_id(fn: FinFn) -> str:
    values = "".join(str(v) for v in fn.values)
    return f"{len(fn.dom)}>{len(fn.cod)}:{values or 'e'}"


def finset_category(max_card: int) -> TabulatedSets:
    """The full subcategory of finite sets on {0..n-1}, n <= max_card"""
    sets = {str(n): canonical(n) for n in range(max_card + 1)}
    functions: dict[str, FinFn] = {}
    morphisms = []
    for a_name, a in sets.items():
        for b_name, b in sets.items():
            for fn in all_functions(a, b):
                m = _function_id(fn)
                functions[m] = fn
                morphisms.append((m, a_name, b_name))
    ids = {fn: m for m, fn in functions.items()}
    compose = {}
    for f, fd, fc in morphisms:
        for g, gd, gc in morphisms:
            if fc == gd:
                compose[(f, g)] = ids[then(functions[f], functions[g])]
    identity_table = {name: ids[identity(s)] for name, s in sets.items()}
    category = validate_category(RawCategory(
        objects=list(sets),
        morphisms=morphisms,
        identity=identity_table,
        compose=compose,
        name=f"FinSet<={max_card}",
    ))
    logger.debug("finset_category_built", max_card=max_card, morphisms=len(morphisms))
    return TabulatedSets(category=category, functions=functions, sets=sets)
