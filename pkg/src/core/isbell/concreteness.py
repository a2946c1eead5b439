"""
Concreteness of Fam(C) from Finite Limits

An internal category C of finite sets carries a faithful internal diagram
built from finite limits alone:

    S  = C0 ×_{C0×C0} (C1×C1)       spans (x, (f1, f2)) with d0 f1 = d0 f2 = x
    T  = (C1×C1) ×_{C0×C0} C0       cospan ends ((f1, f2), y) with d1 f1 = d1 f2 = y
    F  = S ×_{C1×C1} T              parallel pairs x ⇉ y, p = the target y

C acts on F by post-composition: f·(a1, a2) = (f∘a1, f∘a2). Each f embeds
through ε(f) = (f, f), which makes the action faithful. The induced
fibered functor Fam(C) -> cod(FinSet) sends a family X to its pullback
along p and exhibits Fam(C) as a concrete fibration.
"""
from dataclasses import dataclass, field
from typing import Any, Optional

import structlog

from ..category.finset import (
    FinFn,
    Pullback,
    diagonal,
    fn_product,
    induce,
    is_mono,
    is_pullback_square,
    parallel_pair_pullback,
    product,
    pullback,
    then,
)
from ..category.universe import FinSetUniverse
from ..errors import InternalConsistencyError
from ..fibration.fibered import FiberedFunctor, is_concrete_fibration
from ..fibration.fundamental import SetsCodomainFibration, Square
from ..fibration.smallness import all_small
from ..internal.externalization import Externalization, FamMorphism, FamObject, externalize
from ..internal.internal_category import (
    InternalCategory,
    InternalDiagram,
    faithfulness_counterexample,
    validate_internal_diagram,
)
from ..models import CheckOutcome
from .choice_spans import small_fib_choice_span

logger = structlog.get_logger()


@dataclass(frozen=True)
class ConcretenessConstruction:
    """The limits behind the faithful diagram, kept for inspection"""
    diagram: InternalDiagram
    spans: Pullback
    cospans: Pullback
    pairs: Pullback
    epsilon: FinFn
    stacked: Pullback = field(repr=False)
    mu: FinFn = field(repr=False)
    gamma: FinFn = field(repr=False)


def _require(condition: bool, what: str, category: str) -> None:
    if not condition:
        logger.error("concreteness_construction_failed", category=category, step=what)
        raise InternalConsistencyError(f"{what} fails for {category}")


def concreteness_diagram(C: InternalCategory) -> ConcretenessConstruction:
    """
    Build (F, p, q) and validate every square of the construction

    Raises InternalConsistencyError when a square is not a pullback, the
    action fails a law, ε is not monic or the action is not faithful.
    """
    d0d0 = fn_product(C.d0, C.d0)
    d1d1 = fn_product(C.d1, C.d1)
    delta = diagonal(C.C0)
    arrows = product(C.C1, C.C1)

    S = pullback(delta, d0d0)
    T = pullback(d1d1, delta)
    F = pullback(S.p2, T.p1)
    p = then(F.p2, T.p2)
    _require(is_pullback_square(S.p2, S.p1, d0d0, delta), "spans square", C.name)
    _require(is_pullback_square(T.p2, T.p1, delta, d1d1), "cospans square", C.name)
    _require(is_pullback_square(F.p2, F.p1, T.p1, S.p2), "parallel pairs square", C.name)

    wedge = parallel_pair_pullback(delta, d0d0, d1d1)
    flattened = {(s[0], s[1], t[1]) for s, t in F.apex}
    _require(flattened == set(wedge.apex) and len(flattened) == len(F.apex), "parallel pair pullback", C.name)

    epsilon = FinFn.from_callable(C.C1, F.apex, lambda f: (
        (C.d0(f), (f, f)),
        ((f, f), C.d1(f)),
    ))
    _require(is_mono(epsilon), "ε monic", C.name)

    source = then(F.p1, S.p1)
    pair_of = then(F.p1, S.p2)
    domain = pullback(C.d0, p)
    stacked = pullback(source, p)
    mu = induce(stacked.apex, then(domain.p1, epsilon), domain.p2)
    _require(is_pullback_square(stacked.p2, stacked.p1, p, source), "stacked pairs square", C.name)

    composable = pullback(d0d0, d1d1)
    gamma = induce(composable.apex, then(stacked.p1, pair_of), then(stacked.p2, pair_of))
    compose_pairs = FinFn.from_callable(composable.apex, arrows.apex, lambda ga: (
        C.c((ga[0][0], ga[1][0])),
        C.c((ga[0][1], ga[1][1])),
    ))
    composed = then(then(mu, gamma), compose_pairs)
    new_source = then(domain.p2, source)
    new_target = then(domain.p1, C.d1)
    q = induce(
        F.apex,
        induce(S.apex, new_source, composed),
        induce(T.apex, composed, new_target),
    )

    diagram = validate_internal_diagram(C, F.apex, p, q)
    witness = faithfulness_counterexample(C, diagram)
    _require(witness is None, "faithfulness", C.name)
    for f in C.C1:
        _require(epsilon(f) == q((f, epsilon(C.i(C.d0(f))))), "ε(f) = f·ε(id)", C.name)

    logger.info("concreteness_diagram_built", category=C.name, carrier=len(F.apex))
    return ConcretenessConstruction(
        diagram=diagram,
        spans=S,
        cospans=T,
        pairs=F,
        epsilon=epsilon,
        stacked=stacked,
        mu=mu,
        gamma=gamma,
    )


def _family_leg(X: FamObject, D: InternalDiagram) -> FinFn:
    """X*F -> I: elements (i, a) with p(a) = X_i"""
    return pullback(X.family, D.p).p1


def diagram_fibered_functor(E: Externalization, D: InternalDiagram) -> FiberedFunctor:
    """
    Fam(C) -> cod(FinSet) induced by a diagram (F, p, q)

    (I, X) goes to X*F -> I; (u, f) goes to the square whose top is
    (i, a) ↦ (u(i), f(i)·a).
    """
    target = SetsCodomainFibration(E.base)

    def on_morphism(m: FamMorphism) -> Square:
        left = _family_leg(m.source, D)
        right = _family_leg(m.target, D)
        top = FinFn.from_callable(left.dom, right.dom, lambda ia: (m.u(ia[0]), D.q((m.f(ia[0]), ia[1]))))
        return Square(top=top, bottom=m.u, left=left, right=right)

    return FiberedFunctor(
        source=E,
        target=target,
        on_objects=lambda X: _family_leg(X, D),
        on_morphisms=on_morphism,
        name=f"U_{E.category.name}",
    )


def sigma_fibered_functor(C: InternalCategory, bound: int, E: Optional[Externalization] = None) -> FiberedFunctor:
    """The fibered functor of the concreteness diagram"""
    E = E or externalize(C, bound)
    return diagram_fibered_functor(E, concreteness_diagram(C).diagram)


def check_concreteness(C: InternalCategory, bound: int) -> CheckOutcome:
    """(Fam(C), U) is a concrete fibration with every function small"""
    E = externalize(C, bound)
    U = sigma_fibered_functor(C, bound, E)
    return is_concrete_fibration(E, U, all_small(FinSetUniverse(bound)), bound)


def object_action_matches_sigma(C: InternalCategory, X: FamObject) -> bool:
    """
    U(X) and the small-fibration Σ_{X,X} agree over I

    (i, (s, t)) ↦ (i, s) is a bijection from the leg of U(X) onto Σ_{X,X}
    commuting with both maps to I.
    """
    D = concreteness_diagram(C).diagram
    leg = _family_leg(X, D)
    sigma = small_fib_choice_span(C, X.index, X.family, X.family)
    image = [(i, pair[0]) for i, pair in leg.dom]
    if len(set(image)) != len(image) or set(image) != set(sigma.sigma.elements):
        return False
    return all(sigma.pi(target) == leg(source) for source, target in zip(leg.dom, image))


def concreteness_summary(construction: ConcretenessConstruction) -> dict[str, Any]:
    return {
        "spans": len(construction.spans.apex),
        "cospans": len(construction.cospans.apex),
        "carrier": len(construction.pairs.apex),
    }
