"""
Fibration Checks

Vertical morphisms, fibers, cartesian morphisms, fibration checking and
cleavages. Over an exact base every check is exhaustive; over the bounded
finite-set universe the competitors range over sets of size <= bound and
the outcome records the bound.
"""
import json
from typing import Any, Iterator, Optional

import structlog

from ..category.fincat import FinCategory, RawCategory, validate_category
from ..errors import NotAFibrationError
from ..models import CheckOutcome
from .base import ComputedFibration, Mor, Obj

logger = structlog.get_logger()


def is_vertical(P: ComputedFibration, m: Mor) -> bool:
    """Whether Pm is an identity"""
    return P.is_vertical(m)


def _text(label: Any) -> str:
    if isinstance(label, str):
        return label
    return json.dumps(label, default=str)


def fiber(P: ComputedFibration, I: Any) -> FinCategory:
    """
    The fiber over I: objects over I and vertical morphisms

    The result goes through validate_category, so a broken oracle surfaces
    as a LawViolationError here.
    """
    identity = P.base.identity(I)
    objects = list(P.objects_over(I))
    names = {X: _text(P.label_object(X)) for X in objects}

    ids: dict[Mor, str] = {}
    morphisms = []
    for X in objects:
        for Y in objects:
            for k, m in enumerate(P.hom_over(X, Y, identity)):
                m_id = m if isinstance(m, str) else f"[{names[X]}]->[{names[Y]}]#{k}"
                ids[m] = m_id
                morphisms.append((m_id, names[X], names[Y]))

    by_id = {m_id: m for m, m_id in ids.items()}
    compose = {}
    for f_id, _, f_cod in morphisms:
        for g_id, g_dom, _ in morphisms:
            if f_cod == g_dom:
                compose[(f_id, g_id)] = ids[P.compose(by_id[f_id], by_id[g_id])]

    category = validate_category(RawCategory(
        objects=[names[X] for X in objects],
        morphisms=morphisms,
        identity={names[X]: ids[P.identity(X)] for X in objects},
        compose=compose,
        name=f"{P.name}_{_text(P.base.label_object(I))}",
    ))
    logger.debug("fiber_built", fibration=P.name, objects=len(objects), morphisms=len(morphisms))
    return category


# ============= CARTESIAN MORPHISMS =============

def _effective_bound(P: ComputedFibration, bound: Optional[int]) -> Optional[int]:
    if P.exact:
        return None
    return P.bound if bound is None else bound


def cartesian_counterexample(
    P: ComputedFibration,
    phi: Mor,
    bound: Optional[int] = None,
) -> Optional[dict[str, Any]]:
    """
    Search for a (v, g) without exactly one mediating γ

    φ: X -> Y over u: I -> J is cartesian when for every g: Z -> Y and v with
    u∘v = Pg there is a unique γ: Z -> X with φ∘γ = g and Pγ = v.
    """
    X, Y = P.dom(phi), P.cod(phi)
    u = P.project(phi)
    I = P.project_object(X)
    for K in P.base.objects(_effective_bound(P, bound)):
        for v in P.base.hom(K, I):
            w = P.base.compose(v, u)
            for Z in P.objects_over(K):
                for g in P.hom_over(Z, Y, w):
                    mediators = [gamma for gamma in P.hom_over(Z, X, v) if P.compose(gamma, phi) == g]
                    if len(mediators) != 1:
                        return {
                            "morphism": P.label_morphism(phi),
                            "competitor": P.label_morphism(g),
                            "along": P.base.label_morphism(v),
                            "mediators": len(mediators),
                        }
    return None


def check_cartesian(
    P: ComputedFibration,
    phi: Mor,
    bound: Optional[int] = None,
    use_exact: bool = False,
) -> CheckOutcome:
    """
    Cartesianness of φ by competitor search (or the fibration's closed form)

    The outcome is bounded when the base is the finite-set universe and is
    flagged when φ's own base objects exceed that bound.
    """
    effective = _effective_bound(P, bound)
    outcome = CheckOutcome(
        check="is_cartesian",
        target=P.name,
        holds=True,
        exact=P.exact,
        bound=effective,
    )
    u = P.project(phi)
    if not P.exact:
        outcome.truncated = P.base.exceeds_bound(P.base.dom(u)) or P.base.exceeds_bound(P.base.cod(u))

    closed_form = P.exact_cartesian(phi) if use_exact else None
    if closed_form is not None:
        outcome.exact = True
        outcome.notes.append("decided by the fibration's closed-form characterization")
        if not closed_form:
            outcome.fail({"morphism": P.label_morphism(phi)})
        return outcome

    counterexample = cartesian_counterexample(P, phi, effective)
    if counterexample is not None:
        outcome.fail(counterexample)
    return outcome


def is_cartesian(P: ComputedFibration, phi: Mor, bound: Optional[int] = None) -> bool:
    return check_cartesian(P, phi, bound).holds


class CartesianOracle:
    """Memoized cartesianness, preferring a closed form when one exists"""

    def __init__(self, P: ComputedFibration, bound: Optional[int] = None, prefer_exact: bool = True):
        self.P = P
        self.bound = bound
        self.prefer_exact = prefer_exact
        self._memo: dict[Mor, bool] = {}

    def __call__(self, phi: Mor) -> bool:
        if phi not in self._memo:
            closed_form = self.P.exact_cartesian(phi) if self.prefer_exact else None
            if closed_form is None:
                closed_form = cartesian_counterexample(self.P, phi, self.bound) is None
            self._memo[phi] = closed_form
        return self._memo[phi]


def cartesian_lifts(P: ComputedFibration, Y: Obj, u: Any, oracle: CartesianOracle) -> Iterator[Mor]:
    """Every cartesian morphism into Y over u, in enumeration order"""
    for X in P.objects_over(P.base.dom(u)):
        for phi in P.hom_over(X, Y, u):
            if oracle(phi):
                yield phi


def find_cartesian_lift(
    P: ComputedFibration,
    Y: Obj,
    u: Any,
    oracle: CartesianOracle,
    declared: bool = True,
) -> Optional[Mor]:
    """
    A cartesian lift of Y along u

    Identities over identities first, then the fibration's declared lift
    (when asked for and cartesian), then the least lift in enumeration
    order.
    """
    if P.base.is_identity(u):
        return P.identity(Y)
    if declared:
        chosen = P.chosen_lift(Y, u)
        if chosen is not None and oracle(chosen):
            return chosen
    return next(cartesian_lifts(P, Y, u, oracle), None)


def is_fibration(P: ComputedFibration, bound: Optional[int] = None) -> CheckOutcome:
    """Every (Y, u: I -> PY) in the universe has a cartesian lift"""
    effective = _effective_bound(P, bound)
    oracle = CartesianOracle(P, effective)
    outcome = CheckOutcome(
        check="is_fibration",
        target=P.name,
        holds=True,
        exact=P.exact,
        bound=effective,
    )
    queries = 0
    for Y in P.total_objects(effective):
        J = P.project_object(Y)
        for I in P.base.objects(effective):
            for u in P.base.hom(I, J):
                queries += 1
                lift = find_cartesian_lift(P, Y, u, oracle)
                if lift is None:
                    logger.info("lift_missing", fibration=P.name, object=_text(P.label_object(Y)))
                    return outcome.fail({
                        "object": P.label_object(Y),
                        "along": P.base.label_morphism(u),
                    })
                if P.exact:
                    outcome.witnesses.append({
                        "object": P.label_object(Y),
                        "along": P.base.label_morphism(u),
                        "lift": P.label_morphism(lift),
                    })
    outcome.details["queries"] = queries
    if not P.exact:
        outcome.notes.append(f"lifts verified for base objects of size <= {effective}")
    logger.debug("fibration_checked", fibration=P.name, queries=queries)
    return outcome


# ============= CLEAVAGES =============

class Cleavage:
    """
    Chosen reindexings u*Y -> Y

    Entries are computed on demand and memoized, so a cleavage of a lazy
    fibration covers any query, including ones beyond the bound. Rule
    "least" takes the first cartesian lift in enumeration order; "declared"
    prefers the fibration's own chosen lift when it is cartesian.
    """

    RULES = ("declared", "least")

    def __init__(self, fibration: ComputedFibration, bound: Optional[int] = None, rule: str = "least"):
        if rule not in self.RULES:
            raise ValueError(f"unknown cleavage rule {rule!r}")
        self.fibration = fibration
        self.bound = _effective_bound(fibration, bound)
        self.rule = rule
        self.oracle = CartesianOracle(fibration, self.bound)
        self._chosen: dict[tuple[Obj, Any], Mor] = {}

    def lift(self, Y: Obj, u: Any) -> Mor:
        key = (Y, u)
        if key not in self._chosen:
            P = self.fibration
            chosen = find_cartesian_lift(P, Y, u, self.oracle, declared=self.rule == "declared")
            if chosen is None:
                raise NotAFibrationError(
                    f"{P.name} has no cartesian lift of {_text(P.label_object(Y))} along "
                    f"{_text(P.base.label_morphism(u))}",
                    {"object": P.label_object(Y), "along": P.base.label_morphism(u)},
                )
            self._chosen[key] = chosen
        return self._chosen[key]

    def reindex(self, Y: Obj, u: Any) -> Obj:
        """u*Y"""
        return self.fibration.dom(self.lift(Y, u))

    def entries(self) -> list[tuple[Obj, Any, Mor]]:
        """All chosen lifts over the universe, in query order"""
        P = self.fibration
        table = []
        for Y in P.total_objects(self.bound):
            J = P.project_object(Y)
            for I in P.base.objects(self.bound):
                for u in P.base.hom(I, J):
                    table.append((Y, u, self.lift(Y, u)))
        return table


def cleave(P: ComputedFibration, bound: Optional[int] = None, rule: str = "least") -> Cleavage:
    """
    Choose reindexings for P

    Over an exact base the whole table is built up front, so a non-fibration
    raises NotAFibrationError here; lazy fibrations fill the table on demand.
    """
    cleavage = Cleavage(P, bound, rule)
    if P.exact:
        entries = cleavage.entries()
        logger.debug("cleavage_tabulated", fibration=P.name, entries=len(entries))
    return cleavage
