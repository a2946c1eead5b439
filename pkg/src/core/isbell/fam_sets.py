"""
Constructs and Concrete Externalizations

A faithful functor U: C -> finite sets extends to a fibered functor
Fam(C) -> cod(FinSet) by taking disjoint unions over the index, and
restricting a fibered functor to 1-indexed families gives a functor on C
back. fam_construct_equivalence runs both directions on a finite category
and checks the choice spans of its 1-indexed families.
"""
from typing import Optional

import structlog

from ..category.fincat import FinCategory, SetFunctor, faithfulness_witness, set_functor_violations
from ..category.finset import FinFn, FinSetObj, canonical, identity
from ..category.spans import concretize, isbell_report
from ..category.universe import FinSetUniverse
from ..errors import FibcatError, InternalConsistencyError
from ..fibration.fibered import FiberedFunctor, is_concrete_fibration
from ..fibration.fundamental import SetsCodomainFibration, Square
from ..fibration.smallness import all_small
from ..internal.externalization import Externalization, FamMorphism, FamObject, externalize, family, fam_hom_over
from ..internal.internal_category import internalize
from ..models import CheckOutcome
from .choice_spans import fam_choice_span
from .pspans import check_fib_isbell

logger = structlog.get_logger()


def extend_to_fam(U: SetFunctor, bound: int, E: Optional[Externalization] = None) -> FiberedFunctor:
    """
    (I, X) ↦ ∐_i U(X_i) -> I and (u, f) ↦ ((i, e) ↦ (u(i), U(f_i)(e)))
    """
    E = E or externalize(internalize(U.source), bound)

    def on_object(X: FamObject) -> FinFn:
        total = FinSetObj(tuple((i, e) for i in X.index for e in U.map_object(X[i])))
        return FinFn(total, X.index, tuple(i for i, _ in total))

    def on_morphism(m: FamMorphism) -> Square:
        left, right = on_object(m.source), on_object(m.target)
        top = FinFn.from_callable(left.dom, right.dom, lambda ie: (
            m.u(ie[0]),
            U.map_morphism(m.f(ie[0]))(ie[1]),
        ))
        return Square(top=top, bottom=m.u, left=left, right=right)

    return FiberedFunctor(
        source=E,
        target=SetsCodomainFibration(E.base),
        on_objects=on_object,
        on_morphisms=on_morphism,
        name=f"Fam({U.source.name})",
    )


def restrict_to_points(V: FiberedFunctor, C: FinCategory) -> SetFunctor:
    """The functor C -> finite sets seen by V on 1-indexed families"""
    E = V.source
    point = canonical(1)
    over = identity(point)
    points = {x: family(E.category, point, (x,)) for x in C.objects}
    objects = {x: V.map_object(X).dom for x, X in points.items()}
    morphisms = {}
    for x, X in points.items():
        for y, Y in points.items():
            for m in fam_hom_over(E.category, X, Y, over):
                morphisms[str(m.f(0))] = V.map_morphism(m).top
    functor = SetFunctor(source=C, objects=objects, morphisms=morphisms)
    violations = set_functor_violations(functor)
    if violations:
        raise InternalConsistencyError(f"restriction to points is not a functor: {violations[0].message}")
    return functor


def _same_functor_up_to_tags(U: SetFunctor, restricted: SetFunctor) -> bool:
    """restricted(x) = {(0, e) | e in U(x)} with the same action"""
    for x in U.source.objects:
        if restricted.map_object(x).elements != tuple((0, e) for e in U.map_object(x)):
            return False
    for m in U.source.morphism_ids:
        expected = tuple((0, e) for e in U.map_morphism(m).values)
        if restricted.map_morphism(m).values != expected:
            return False
    return True


def fam_construct_equivalence(C: FinCategory, bound: int) -> CheckOutcome:
    """
    A finite category is a construct exactly when Fam(C) is concrete

    construct      concretize(C) is a faithful functor
    isbell         the choice sets of C exist for every pair
    concrete       extend_to_fam(U) makes Fam(C) a concrete fibration
    points         restricting it to 1-indexed families gives U back
    choice_spans   the 1-indexed Fam choice spans pass the fibrational
                   Isbell check
    """
    outcome = CheckOutcome(
        check="fam_construct_equivalence",
        target=C.name,
        holds=True,
        exact=False,
        bound=bound,
    )
    try:
        U = concretize(C)
    except FibcatError as error:
        return outcome.fail({"step": "construct", "error": str(error)})
    if faithfulness_witness(U) is not None:
        return outcome.fail({"step": "construct", "error": "concretization is not faithful"})
    outcome.details["isbell"] = {f"{a},{b}": size for (a, b), size in isbell_report(C).sizes().items()}

    E = externalize(internalize(C), bound)
    V = extend_to_fam(U, bound, E)
    outcome.merge(is_concrete_fibration(E, V, all_small(FinSetUniverse(bound)), bound), "concrete")
    if not outcome.holds:
        return outcome
    if not _same_functor_up_to_tags(U, restrict_to_points(V, C)):
        return outcome.fail({"step": "points", "error": "restriction does not recover the concretization"})

    point = canonical(1)
    for a in C.objects:
        for b in C.objects:
            A, B = family(E.category, point, (a,)), family(E.category, point, (b,))
            data = fam_choice_span(C, A, B)
            outcome.merge(check_fib_isbell(E, data, A, B, bound), f"choice_spans[{a},{b}]")
            if not outcome.holds:
                return outcome
    logger.info("fam_construct_equivalence_checked", category=C.name, status=outcome.status.value)
    return outcome
