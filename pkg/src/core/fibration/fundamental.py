"""
Fundamental Fibrations

The codomain functor cod: B^→ -> B. For a finite base the arrow category
is tabulated and cod becomes a TabulatedFibration; over the bounded
finite-set universe the arrow category is infinite and answered lazily by
SetsCodomainFibration. In both, a square is cartesian iff it is a
pullback.
"""
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterator, NamedTuple, Optional

import structlog

from ..category.fincat import (
    FinCategory,
    FinFunctor,
    RawCategory,
    is_pullback_cone,
    missing_pullbacks,
    validate_category,
    validate_functor,
)
from ..category.finset import (
    FinFn,
    FinSetObj,
    canonical,
    identity,
    is_pullback_square,
    pullback,
    then,
)
from ..category.universe import FinSetUniverse
from ..errors import MissingPullbackError
from .base import ComputedFibration, TabulatedFibration

logger = structlog.get_logger()


class ArrowSquare(NamedTuple):
    """A morphism f -> g of the arrow category: t on domains, s on codomains"""
    source: str
    target: str
    top: str
    bottom: str


class ArrowCategory(NamedTuple):
    category: FinCategory
    codomain: FinFunctor
    squares: dict[str, ArrowSquare]


def _square_id(source: str, target: str, top: str, bottom: str) -> str:
    return f"{source}=>{target}[{top},{bottom}]"


def arrow_category(B: FinCategory) -> ArrowCategory:
    """
    B^→ with the codomain functor

    Objects are the morphism ids of B; a morphism f -> g is a commuting
    square (t, s) with s∘f = g∘t.
    """
    squares: dict[str, ArrowSquare] = {}
    for f in B.morphism_ids:
        for g in B.morphism_ids:
            for t in B.hom(B.dom(f), B.dom(g)):
                for s in B.hom(B.cod(f), B.cod(g)):
                    if B.compose(f, s) == B.compose(t, g):
                        squares[_square_id(f, g, t, s)] = ArrowSquare(f, g, t, s)

    compose = {}
    for m1, sq1 in squares.items():
        for m2, sq2 in squares.items():
            if sq1.target == sq2.source:
                compose[(m1, m2)] = _square_id(
                    sq1.source, sq2.target,
                    B.compose(sq1.top, sq2.top),
                    B.compose(sq1.bottom, sq2.bottom),
                )

    category = validate_category(RawCategory(
        objects=list(B.morphism_ids),
        morphisms=[(m, sq.source, sq.target) for m, sq in squares.items()],
        identity={
            f: _square_id(f, f, B.identity(B.dom(f)), B.identity(B.cod(f)))
            for f in B.morphism_ids
        },
        compose=compose,
        name=f"{B.name}^->",
    ))
    codomain = validate_functor(
        category,
        B,
        {f: B.cod(f) for f in B.morphism_ids},
        {m: sq.bottom for m, sq in squares.items()},
    )
    logger.debug("arrow_category_built", base=B.name, squares=len(squares))
    return ArrowCategory(category, codomain, squares)


class ArrowFibration(TabulatedFibration):
    """cod: B^→ -> B over a finite category"""

    def __init__(self, B: FinCategory):
        arrow = arrow_category(B)
        super().__init__(arrow.codomain, name=f"cod({B.name})")
        self.base_category = B
        self.squares = arrow.squares

    def exact_cartesian(self, m: str) -> Optional[bool]:
        sq = self.squares[m]
        return is_pullback_cone(self.base_category, sq.target, sq.bottom, sq.top, sq.source)

    def leg(self, X: str) -> str:
        return X


def codomain_fibration(B: FinCategory) -> ArrowFibration:
    """cod over B without asking for pullbacks; may fail to be a fibration"""
    return ArrowFibration(B)


def fundamental_fibration(B: FinCategory) -> ArrowFibration:
    """
    The fundamental fibration of B

    Raises MissingPullbackError naming the first cospan that has no
    pullback; with all pullbacks present cod is a fibration.
    """
    missing = missing_pullbacks(B)
    if missing:
        left, right = missing[0]
        logger.warning("pullback_missing", base=B.name, left=left, right=right, total=len(missing))
        raise MissingPullbackError(left, right)
    return ArrowFibration(B)


# ============= OVER THE FINITE-SET UNIVERSE =============

@dataclass(frozen=True)
class Square:
    """
    A morphism of the arrow category of finite sets

        dom(left) --top--> dom(right)
           |                  |
          left              right
           v                  v
        cod(left) -bottom-> cod(right)
    """
    top: FinFn
    bottom: FinFn
    left: FinFn
    right: FinFn

    def commutes(self) -> bool:
        typed = (
            self.top.dom == self.left.dom
            and self.top.cod == self.right.dom
            and self.bottom.dom == self.left.cod
            and self.bottom.cod == self.right.cod
        )
        return typed and then(self.top, self.right) == then(self.left, self.bottom)


class SetsCodomainFibration(ComputedFibration):
    """
    cod: Sets^→ -> Sets, restricted to the bounded universe

    Objects over I are functions a: A -> I; the ones enumerated have
    canonical domains of size <= bound, but any function into a base
    object is accepted as an object.
    """

    def __init__(self, universe: FinSetUniverse):
        self.base = universe
        self.name = f"cod(FinSet<={universe.bound})"

    def objects_over(self, I: FinSetObj) -> Iterator[FinFn]:
        for size in range(self.base.bound + 1):
            A = canonical(size)
            for values in cartesian(I.elements, repeat=size):
                yield FinFn(A, I, values)

    def hom_over(self, X: FinFn, Y: FinFn, u: FinFn) -> Iterator[Square]:
        if X.cod != u.dom or Y.cod != u.cod:
            return
        choices = [
            [y for y in Y.dom if Y(y) == u(X(x))]
            for x in X.dom
        ]
        for values in cartesian(*choices):
            yield Square(FinFn(X.dom, Y.dom, values), u, X, Y)

    def compose(self, first: Square, second: Square) -> Square:
        return Square(
            top=then(first.top, second.top),
            bottom=then(first.bottom, second.bottom),
            left=first.left,
            right=second.right,
        )

    def identity(self, X: FinFn) -> Square:
        return Square(identity(X.dom), identity(X.cod), X, X)

    def project_object(self, X: FinFn) -> FinSetObj:
        return X.cod

    def project(self, m: Square) -> FinFn:
        return m.bottom

    def dom(self, m: Square) -> FinFn:
        return m.left

    def cod(self, m: Square) -> FinFn:
        return m.right

    def exact_cartesian(self, m: Square) -> Optional[bool]:
        return is_pullback_square(m.top, m.left, m.right, m.bottom)

    def chosen_lift(self, Y: FinFn, u: FinFn) -> Square:
        """The pullback square of Y along u"""
        limit = pullback(u, Y)
        return Square(top=limit.p2, bottom=u, left=limit.p1, right=Y)

    def is_valid_morphism(self, m: Square) -> bool:
        return m.commutes()

    def leg(self, X: FinFn) -> FinFn:
        return X

    def label_object(self, X: FinFn) -> str:
        return repr(X)

    def label_morphism(self, m: Square) -> dict[str, str]:
        return {"top": repr(m.top), "bottom": repr(m.bottom)}
