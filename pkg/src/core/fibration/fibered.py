"""
Fibered Functors and Concrete Fibrations

A fibered functor U: P -> Q over a shared base commutes with both
projections on the nose and sends cartesian morphisms to cartesian ones;
it need not preserve chosen reindexings. (P, U) is a concrete fibration
when U lands in a codomain fibration, is faithful, and every object goes
to a small leg.
"""
from dataclasses import dataclass
from typing import Any, Callable, Optional

import structlog

from ..errors import Violation
from ..models import CheckOutcome
from .base import ComputedFibration, Mor, Obj
from .checks import CartesianOracle, is_fibration
from .smallness import Smallness

logger = structlog.get_logger()


@dataclass(frozen=True)
class FiberedFunctor:
    source: ComputedFibration
    target: ComputedFibration
    on_objects: Callable[[Obj], Obj]
    on_morphisms: Callable[[Mor], Mor]
    name: str = "U"

    def map_object(self, X: Obj) -> Obj:
        return self.on_objects(X)

    def map_morphism(self, m: Mor) -> Mor:
        return self.on_morphisms(m)


def _total_morphisms(P: ComputedFibration, bound: Optional[int]) -> list[Mor]:
    objects = list(P.total_objects(bound))
    return [m for X in objects for Y in objects for m in P.hom(X, Y)]


def fibered_functor_violations(U: FiberedFunctor, bound: Optional[int] = None) -> list[Violation]:
    """
    Projection, functoriality and cartesian-preservation failures of U

    Quantifies over the source's total category restricted to the bound.
    """
    P, Q = U.source, U.target
    violations: list[Violation] = []
    objects = list(P.total_objects(bound))
    morphisms = [m for X in objects for Y in objects for m in P.hom(X, Y)]

    for X in objects:
        if Q.project_object(U.map_object(X)) != P.project_object(X):
            violations.append(Violation(
                "over_base", "U does not preserve the projection of an object",
                {"object": P.label_object(X)},
            ))
        if U.map_morphism(P.identity(X)) != Q.identity(U.map_object(X)):
            violations.append(Violation(
                "preserves_identity", "U(id) is not an identity", {"object": P.label_object(X)},
            ))

    for m in morphisms:
        image = U.map_morphism(m)
        if Q.project(image) != P.project(m):
            violations.append(Violation(
                "over_base", "U does not preserve the projection of a morphism",
                {"morphism": P.label_morphism(m)},
            ))
        if Q.dom(image) != U.map_object(P.dom(m)) or Q.cod(image) != U.map_object(P.cod(m)):
            violations.append(Violation(
                "preserves_typing", "U(m) has the wrong endpoints", {"morphism": P.label_morphism(m)},
            ))
    if violations:
        return violations

    by_domain: dict[Obj, list[Mor]] = {}
    for m in morphisms:
        by_domain.setdefault(P.dom(m), []).append(m)
    for f in morphisms:
        for g in by_domain.get(P.cod(f), []):
            if U.map_morphism(P.compose(f, g)) != Q.compose(U.map_morphism(f), U.map_morphism(g)):
                violations.append(Violation(
                    "preserves_composition", "U(g∘f) != U(g)∘U(f)",
                    {"first": P.label_morphism(f), "second": P.label_morphism(g)},
                ))

    source_cartesian = CartesianOracle(P, bound)
    target_cartesian = CartesianOracle(Q, bound)
    for m in morphisms:
        if source_cartesian(m) and not target_cartesian(U.map_morphism(m)):
            violations.append(Violation(
                "preserves_cartesian", "U sends a cartesian morphism to a non-cartesian one",
                {"morphism": P.label_morphism(m)},
            ))
    return violations


def faithfulness_counterexample(U: FiberedFunctor, bound: Optional[int] = None) -> Optional[dict[str, Any]]:
    """Two parallel morphisms with the same image, if any"""
    P = U.source
    objects = list(P.total_objects(bound))
    for X in objects:
        for Y in objects:
            seen: dict[Any, Mor] = {}
            for m in P.hom(X, Y):
                image = U.map_morphism(m)
                if image in seen:
                    return {"first": P.label_morphism(seen[image]), "second": P.label_morphism(m)}
                seen[image] = m
    return None


def is_concrete_fibration(
    P: ComputedFibration,
    U: FiberedFunctor,
    S: Smallness,
    bound: Optional[int] = None,
    check_fibration: bool = False,
) -> CheckOutcome:
    """
    Whether (P, U) is a concrete fibration with small morphisms S

    Checks, in order: U is a fibered functor, U is faithful, every Uf is a
    commuting square over Pf, and every leg UX is small. The first failure
    becomes the counterexample; the witness table records the legs.
    """
    Q = U.target
    effective = None if P.exact else (P.bound if bound is None else bound)
    outcome = CheckOutcome(
        check="is_concrete_fibration",
        target=f"{P.name} -> {Q.name}",
        holds=True,
        exact=P.exact,
        bound=effective,
    )
    if check_fibration:
        outcome.merge(is_fibration(P, effective), "fibration")
        if not outcome.holds:
            return outcome

    violations = fibered_functor_violations(U, effective)
    if violations:
        outcome.details["fibered_functor_violations"] = [v.to_dict() for v in violations]
        return outcome.fail({"law": violations[0].law, **violations[0].witness})

    witness = faithfulness_counterexample(U, effective)
    if witness is not None:
        return outcome.fail({"law": "faithful", **witness})

    for m in _total_morphisms(P, effective):
        image = U.map_morphism(m)
        if not Q.is_valid_morphism(image) or Q.project(image) != P.project(m):
            return outcome.fail({"law": "commuting_square", "morphism": P.label_morphism(m)})

    legs = 0
    for X in P.total_objects(effective):
        leg = Q.leg(U.map_object(X))
        legs += 1
        if not S.contains(leg):
            return outcome.fail({"law": "small_leg", "object": P.label_object(X)})
        if P.exact:
            outcome.witnesses.append({"object": P.label_object(X), "leg": Q.label_object(U.map_object(X))})
    outcome.details["objects_checked"] = legs
    logger.info("concrete_fibration_checked", fibration=P.name, status=outcome.status.value, objects=legs)
    return outcome
