"""
Finite Sets and Functions

The category of finite sets with the limit constructions the internal
category machinery needs: products, pullbacks, equalizers, diagonals and
the pullback of a parallel pair.

Labels of limit elements are the defining tuples, enumerated in the
lexicographic order induced by the element orders of the inputs, so every
construction is deterministic.
"""
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple

import structlog

from ..errors import (
    CodomainMismatchError,
    PartialityError,
    ShapeMismatchError,
    Violation,
)

logger = structlog.get_logger()

Label = Hashable


@dataclass(frozen=True)
class FinSetObj:
    """A finite set with a fixed enumeration order"""
    elements: tuple[Label, ...]
    _index: dict[Label, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index: dict[Label, int] = {}
        for position, element in enumerate(self.elements):
            if element in index:
                raise ShapeMismatchError(f"duplicate element label {element!r}")
            index[element] = position
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, elements: Iterable[Label]) -> "FinSetObj":
        return cls(tuple(elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Label]:
        return iter(self.elements)

    def __contains__(self, element: object) -> bool:
        try:
            return element in self._index
        except TypeError:
            return False

    def position(self, element: Label) -> int:
        return self._index[element]

    def __repr__(self) -> str:
        return "{" + ", ".join(map(repr, self.elements)) + "}"


@dataclass(frozen=True)
class FinFn:
    """A total function between finite sets, stored as a value table"""
    dom: FinSetObj
    cod: FinSetObj
    values: tuple[Label, ...]

    def __post_init__(self):
        if len(self.values) != len(self.dom):
            raise PartialityError([
                Violation(
                    law="totality",
                    message=f"table has {len(self.values)} values for {len(self.dom)} elements",
                )
            ])
        for element, value in zip(self.dom.elements, self.values):
            if value not in self.cod:
                raise CodomainMismatchError(
                    f"value {value!r} of {element!r} lies outside the codomain {self.cod!r}"
                )

    @classmethod
    def from_mapping(cls, dom: FinSetObj, cod: FinSetObj, table: Mapping[Label, Label]) -> "FinFn":
        missing = [x for x in dom if x not in table]
        if missing:
            raise PartialityError([
                Violation(
                    law="totality",
                    message=f"no value for {x!r}",
                    witness={"element": repr(x)},
                )
                for x in missing
            ])
        return cls(dom, cod, tuple(table[x] for x in dom))

    @classmethod
    def from_callable(cls, dom: FinSetObj, cod: FinSetObj, rule: Callable[[Any], Label]) -> "FinFn":
        return cls(dom, cod, tuple(rule(x) for x in dom))

    def __call__(self, element: Label) -> Label:
        try:
            return self.values[self.dom.position(element)]
        except KeyError:
            raise CodomainMismatchError(f"{element!r} is not in the domain {self.dom!r}") from None

    def items(self) -> Iterator[tuple[Label, Label]]:
        return zip(self.dom.elements, self.values)

    def as_dict(self) -> dict[Label, Label]:
        return dict(self.items())

    def __repr__(self) -> str:
        pairs = ", ".join(f"{x!r}↦{y!r}" for x, y in self.items())
        return f"FinFn({pairs})"


class Pullback(NamedTuple):
    apex: FinSetObj
    p1: FinFn
    p2: FinFn


class ParallelPairPullback(NamedTuple):
    apex: FinSetObj
    to_T_left: FinFn
    to_X: FinFn
    to_T_right: FinFn


class Equalizer(NamedTuple):
    apex: FinSetObj
    inclusion: FinFn


# ============= BASIC OBJECTS AND MORPHISMS =============

def canonical(size: int) -> FinSetObj:
    """The canonical set {0, ..., size-1}"""
    return FinSetObj(tuple(range(size)))


def empty() -> FinSetObj:
    return FinSetObj(())


def identity(a: FinSetObj) -> FinFn:
    return FinFn(a, a, a.elements)


def constant(dom: FinSetObj, cod: FinSetObj, value: Label) -> FinFn:
    return FinFn(dom, cod, tuple(value for _ in dom))


def then(f: FinFn, g: FinFn) -> FinFn:
    """Diagrammatic composite: first f, then g (that is g∘f)"""
    if f.cod != g.dom:
        raise CodomainMismatchError(f"cannot compose {f!r} then {g!r}: {f.cod!r} != {g.dom!r}")
    return FinFn(f.dom, g.cod, tuple(g(y) for y in f.values))


def all_functions(dom: FinSetObj, cod: FinSetObj) -> Iterator[FinFn]:
    """Every function dom -> cod, in lexicographic order of value tables"""
    for values in cartesian(cod.elements, repeat=len(dom)):
        yield FinFn(dom, cod, values)


def is_mono(f: FinFn) -> bool:
    """Injectivity; coincides with monicity in finite sets"""
    return len(set(f.values)) == len(f.values)


def is_epi(f: FinFn) -> bool:
    return set(f.values) == set(f.cod.elements)


def is_iso(f: FinFn) -> bool:
    return is_mono(f) and is_epi(f)


def inverse(f: FinFn) -> FinFn:
    if not is_iso(f):
        raise ShapeMismatchError(f"{f!r} is not invertible")
    table = {y: x for x, y in f.items()}
    return FinFn.from_mapping(f.cod, f.dom, table)


# ============= LIMITS =============

def product(a: FinSetObj, b: FinSetObj) -> Pullback:
    """Binary product with its two projections"""
    apex = FinSetObj(tuple((x, y) for x in a for y in b))
    p1 = FinFn(apex, a, tuple(x for x, _ in apex))
    p2 = FinFn(apex, b, tuple(y for _, y in apex))
    return Pullback(apex, p1, p2)


def pair(f: FinFn, g: FinFn) -> FinFn:
    """<f, g> : X -> A × B"""
    if f.dom != g.dom:
        raise ShapeMismatchError("pairing needs a common domain")
    apex = product(f.cod, g.cod).apex
    return FinFn(f.dom, apex, tuple((f(x), g(x)) for x in f.dom))


def fn_product(f: FinFn, g: FinFn) -> FinFn:
    """f × g : A × B -> C × D"""
    dom = product(f.dom, g.dom).apex
    cod = product(f.cod, g.cod).apex
    return FinFn(dom, cod, tuple((f(x), g(y)) for x, y in dom))


def diagonal(a: FinSetObj) -> FinFn:
    """Δ : a -> a × a, x ↦ (x, x)"""
    return FinFn(a, product(a, a).apex, tuple((x, x) for x in a))


def pullback(f: FinFn, g: FinFn) -> Pullback:
    """
    Pullback of the cospan (f, g)

    apex = {(x, y) | f(x) = g(y)}, p1(x, y) = x, p2(x, y) = y.
    """
    if f.cod != g.cod:
        raise CodomainMismatchError(f"pullback needs a shared codomain: {f.cod!r} != {g.cod!r}")
    apex = FinSetObj(tuple((x, y) for x in f.dom for y in g.dom if f(x) == g(y)))
    p1 = FinFn(apex, f.dom, tuple(x for x, _ in apex))
    p2 = FinFn(apex, g.dom, tuple(y for _, y in apex))
    return Pullback(apex, p1, p2)


def equalizer(f: FinFn, g: FinFn) -> Equalizer:
    if f.dom != g.dom or f.cod != g.cod:
        raise CodomainMismatchError("equalizer needs a parallel pair")
    apex = FinSetObj(tuple(x for x in f.dom if f(x) == g(x)))
    return Equalizer(apex, FinFn(apex, f.dom, apex.elements))


def parallel_pair_pullback(h: FinFn, f: FinFn, g: FinFn) -> ParallelPairPullback:
    """
    Pullback of the parallel pair (f, g) along h

    The limit of the W-shaped diagram T -h-> A <-f- X -g-> A <-h- T:
    P = {(t, x, t') | h(t) = f(x), g(x) = h(t')}.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatchError("f and g must be parallel")
    if h.cod != f.cod:
        raise ShapeMismatchError(f"h must land in {f.cod!r}, got {h.cod!r}")
    apex = FinSetObj(tuple(
        (t, x, t2)
        for t in h.dom
        for x in f.dom
        if h(t) == f(x)
        for t2 in h.dom
        if g(x) == h(t2)
    ))
    return ParallelPairPullback(
        apex=apex,
        to_T_left=FinFn(apex, h.dom, tuple(t for t, _, _ in apex)),
        to_X=FinFn(apex, f.dom, tuple(x for _, x, _ in apex)),
        to_T_right=FinFn(apex, h.dom, tuple(t2 for _, _, t2 in apex)),
    )


def induce(target: FinSetObj, *components: FinFn) -> FinFn:
    """
    The unique map into a limit whose elements are tuples

    x ↦ (c1(x), ..., cn(x)); raises when the cone does not commute, i.e.
    when some tuple is not an element of the target.
    """
    if not components:
        raise ShapeMismatchError("induce needs at least one component")
    dom = components[0].dom
    if any(c.dom != dom for c in components):
        raise ShapeMismatchError("cone legs must share a domain")
    values = tuple(tuple(c(x) for c in components) for x in dom)
    for x, value in zip(dom, values):
        if value not in target:
            raise CodomainMismatchError(f"cone does not commute at {x!r}: {value!r} not in limit")
    return FinFn(dom, target, values)


def is_pullback_square(top: FinFn, left: FinFn, right: FinFn, bottom: FinFn) -> bool:
    """
    Whether the square

        A --top--> B
        |          |
       left      right
        v          v
        C --bottom-> D

    commutes and the comparison A -> C ×_D B is a bijection.
    """
    if top.dom != left.dom or top.cod != right.dom or left.cod != bottom.dom or right.cod != bottom.cod:
        return False
    if then(top, right) != then(left, bottom):
        return False
    limit = pullback(bottom, right)
    comparison = [(left(x), top(x)) for x in top.dom]
    return len(set(comparison)) == len(comparison) == len(limit.apex)
