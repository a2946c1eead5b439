"""
Computed Fibrations

A fibration is handled through oracles: enumerate the total objects over a
base object, enumerate the total morphisms between two objects over a base
morphism, compose, and project. Abstract finite fibrations are tabulated
functors; Fam constructions and the fundamental fibration over finite sets
answer the same queries lazily, because their total categories are
infinite.

Base categories come in two flavours behind one protocol: a sealed
FinCategory (exact, every quantifier is exhaustive) and the bounded
finite-set universe (every quantifier ranges over sets of size <= bound).
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Iterator, Optional, Protocol

import structlog

from ..category.fincat import FinCategory, FinFunctor, identity_functor
from ..errors import ShapeMismatchError, UnknownObjectError

logger = structlog.get_logger()

Obj = Hashable
Mor = Hashable


class BaseCategory(Protocol):
    exact: bool
    bound: Optional[int]

    def objects(self, bound: Optional[int] = None) -> Iterable[Any]: ...

    def hom(self, a: Any, b: Any) -> Iterable[Any]: ...

    def compose(self, first: Any, second: Any) -> Any: ...

    def identity(self, a: Any) -> Any: ...

    def dom(self, m: Any) -> Any: ...

    def cod(self, m: Any) -> Any: ...

    def is_identity(self, m: Any) -> bool: ...

    def stages(self, a: Any) -> Iterable[Any]: ...

    def exceeds_bound(self, a: Any) -> bool: ...

    def label_object(self, a: Any) -> Any: ...

    def label_morphism(self, m: Any) -> Any: ...


@dataclass(frozen=True)
class FinCategoryBase:
    """A sealed finite category used as a base; every quantifier is exhaustive"""
    category: FinCategory
    exact: bool = True
    bound: Optional[int] = None

    def objects(self, bound: Optional[int] = None) -> Iterator[str]:
        return iter(self.category.objects)

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self.category.hom(a, b)

    def compose(self, first: str, second: str) -> str:
        return self.category.compose(first, second)

    def identity(self, a: str) -> str:
        return self.category.identity(a)

    def dom(self, m: str) -> str:
        return self.category.dom(m)

    def cod(self, m: str) -> str:
        return self.category.cod(m)

    def is_identity(self, m: str) -> bool:
        return self.category.is_identity(m)

    def stages(self, a: str) -> Iterator[str]:
        """Every morphism into a"""
        for x in self.category.objects:
            yield from self.category.hom(x, a)

    def exceeds_bound(self, a: str) -> bool:
        return False

    def label_object(self, a: str) -> str:
        return a

    def label_morphism(self, m: str) -> str:
        return m


class ComputedFibration(ABC):
    """
    Oracle interface of a functor P: X -> B

    Subclasses answer the abstract queries; everything else is derived.
    Oracles must be pure: the same query always yields the same answer in
    the same order.
    """

    name: str = "P"
    base: BaseCategory

    @abstractmethod
    def objects_over(self, I: Any) -> Iterable[Obj]:
        """Total objects X with PX = I"""

    @abstractmethod
    def hom_over(self, X: Obj, Y: Obj, u: Any) -> Iterable[Mor]:
        """Total morphisms X -> Y projecting to u"""

    @abstractmethod
    def compose(self, first: Mor, second: Mor) -> Mor:
        """second∘first"""

    @abstractmethod
    def identity(self, X: Obj) -> Mor: ...

    @abstractmethod
    def project_object(self, X: Obj) -> Any: ...

    @abstractmethod
    def project(self, m: Mor) -> Any: ...

    @abstractmethod
    def dom(self, m: Mor) -> Obj: ...

    @abstractmethod
    def cod(self, m: Mor) -> Obj: ...

    # ---- derived queries ----

    @property
    def exact(self) -> bool:
        return self.base.exact

    @property
    def bound(self) -> Optional[int]:
        return self.base.bound

    def total_objects(self, bound: Optional[int] = None) -> Iterator[Obj]:
        for I in self.base.objects(bound):
            yield from self.objects_over(I)

    def hom(self, X: Obj, Y: Obj) -> Iterator[Mor]:
        for u in self.base.hom(self.project_object(X), self.project_object(Y)):
            yield from self.hom_over(X, Y, u)

    def is_vertical(self, m: Mor) -> bool:
        return self.base.is_identity(self.project(m))

    def exact_cartesian(self, m: Mor) -> Optional[bool]:
        """A closed-form cartesianness test, when the fibration knows one"""
        return None

    def chosen_lift(self, Y: Obj, u: Any) -> Optional[Mor]:
        """The lift of a declared cleavage, for cloven fibrations"""
        return None

    def vertical_inverse(self, m: Mor) -> Optional[Mor]:
        X, Y = self.dom(m), self.cod(m)
        I = self.project_object(X)
        identity = self.base.identity(I)
        for n in self.hom_over(Y, X, identity):
            if self.compose(m, n) == self.identity(X) and self.compose(n, m) == self.identity(Y):
                return n
        return None

    def is_vertical_iso(self, m: Mor) -> bool:
        return self.is_vertical(m) and self.vertical_inverse(m) is not None

    def is_valid_morphism(self, m: Mor) -> bool:
        return True

    def leg(self, X: Obj) -> Any:
        """The base morphism an object of a codomain fibration stands for"""
        raise ShapeMismatchError(f"{self.name} is not a codomain fibration")

    def label_object(self, X: Obj) -> Any:
        return X

    def label_morphism(self, m: Mor) -> Any:
        return m


class TabulatedFibration(ComputedFibration):
    """A functor between finite categories, queried as a fibration candidate"""

    def __init__(self, functor: FinFunctor, name: Optional[str] = None):
        self.functor = functor
        self.total = functor.source
        self.base = FinCategoryBase(functor.target)
        self.name = name or f"{functor.source.name}->{functor.target.name}"
        self._over: dict[str, list[str]] = {I: [] for I in functor.target.objects}
        for X in self.total.objects:
            self._over[functor.map_object(X)].append(X)

    def objects_over(self, I: str) -> list[str]:
        if I not in self._over:
            raise UnknownObjectError(I, self.base.category.name)
        return self._over[I]

    def hom_over(self, X: str, Y: str, u: str) -> list[str]:
        return [m for m in self.total.hom(X, Y) if self.functor.map_morphism(m) == u]

    def compose(self, first: str, second: str) -> str:
        return self.total.compose(first, second)

    def identity(self, X: str) -> str:
        return self.total.identity(X)

    def project_object(self, X: str) -> str:
        return self.functor.map_object(X)

    def project(self, m: str) -> str:
        return self.functor.map_morphism(m)

    def dom(self, m: str) -> str:
        return self.total.dom(m)

    def cod(self, m: str) -> str:
        return self.total.cod(m)


def identity_fibration(B: FinCategory) -> TabulatedFibration:
    """id: B -> B; every morphism is cartesian and every fiber is trivial"""
    return TabulatedFibration(identity_functor(B), name=f"id({B.name})")
