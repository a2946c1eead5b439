"""
Smallness Predicates

A class S of morphisms of a base is a notion of smallness when it contains
every isomorphism, is closed under composition, is stable under pullback
and satisfies right cancellation (if f and f∘g are small, so is g).

Two shapes: SmallnessPredicate names its members in a finite category;
FunctionClass decides membership of finite-set functions by a rule and is
validated over the bounded universe.
"""
from dataclasses import dataclass
from typing import Callable, Union

import structlog

from ..category.fincat import FinCategory, find_pullback
from ..category.finset import FinFn, is_epi, is_iso, is_mono, pullback, then
from ..category.universe import FinSetUniverse
from ..errors import MissingPullbackError, UnknownObjectError, Violation
from ..models import CheckOutcome

logger = structlog.get_logger()


@dataclass(frozen=True)
class SmallnessPredicate:
    """The small morphisms of a finite category, by id"""
    base: FinCategory
    members: frozenset[str]
    name: str = "S"

    def __post_init__(self):
        unknown = sorted(self.members - set(self.base.morphism_ids))
        if unknown:
            raise UnknownObjectError(unknown[0], f"smallness {self.name}")

    def contains(self, m: str) -> bool:
        return m in self.members


FUNCTION_RULES: dict[str, Callable[[FinFn], bool]] = {
    "all": lambda f: True,
    "injective": is_mono,
    "surjective": is_epi,
    "isomorphisms": is_iso,
}


@dataclass(frozen=True)
class FunctionClass:
    """Finite-set functions selected by a named rule"""
    universe: FinSetUniverse
    rule: str
    name: str = "S"

    def __post_init__(self):
        if self.rule not in FUNCTION_RULES:
            raise UnknownObjectError(self.rule, "smallness rules")

    def contains(self, f: FinFn) -> bool:
        return FUNCTION_RULES[self.rule](f)


Smallness = Union[SmallnessPredicate, FunctionClass]


def all_small(base: Union[FinCategory, FinSetUniverse], name: str = "All") -> Smallness:
    """Every morphism small"""
    if isinstance(base, FinSetUniverse):
        return FunctionClass(base, "all", name)
    return SmallnessPredicate(base, frozenset(base.morphism_ids), name)


def _table_violations(S: SmallnessPredicate, require_pullbacks: bool) -> list[Violation]:
    C = S.base
    violations = []
    for m in C.morphism_ids:
        if C.is_iso(m) and not S.contains(m):
            violations.append(Violation("isomorphisms", f"isomorphism {m} is not small", {"morphism": m}))

    for f, g, h in C.composites:
        if S.contains(f) and S.contains(g) and not S.contains(h):
            violations.append(Violation(
                "composition", f"{g}∘{f} = {h} is not small", {"first": f, "second": g, "composite": h},
            ))

    for f in sorted(S.members):
        for g in C.morphism_ids:
            if C.cod(g) != C.cod(f):
                continue
            limit = find_pullback(C, f, g)
            if limit is None:
                if require_pullbacks:
                    raise MissingPullbackError(f, g)
                continue
            if not S.contains(limit.p2):
                violations.append(Violation(
                    "pullback_stability",
                    f"pullback {limit.p2} of {f} along {g} is not small",
                    {"small": f, "along": g, "pullback": limit.p2},
                ))

    for g, f, h in C.composites:
        if S.contains(f) and S.contains(h) and not S.contains(g):
            violations.append(Violation(
                "right_cancellation",
                f"{f} and {f}∘{g} = {h} are small but {g} is not",
                {"small": f, "composite": h, "cancelled": g},
            ))
    return violations


def _universe_violations(S: FunctionClass) -> list[Violation]:
    universe = S.universe
    sets = list(universe.objects())
    violations = []

    for a in sets:
        for b in sets:
            for f in universe.hom(a, b):
                if is_iso(f) and not S.contains(f):
                    violations.append(Violation("isomorphisms", f"isomorphism {f!r} is not small", {"morphism": repr(f)}))

    for a in sets:
        for b in sets:
            for g in universe.hom(a, b):
                for c in sets:
                    for f in universe.hom(b, c):
                        composite = then(g, f)
                        if S.contains(g) and S.contains(f) and not S.contains(composite):
                            violations.append(Violation(
                                "composition", f"{f!r}∘{g!r} is not small",
                                {"first": repr(g), "second": repr(f)},
                            ))
                        if S.contains(f) and S.contains(composite) and not S.contains(g):
                            violations.append(Violation(
                                "right_cancellation",
                                f"{f!r} and its composite with {g!r} are small but {g!r} is not",
                                {"small": repr(f), "cancelled": repr(g)},
                            ))

    for a in sets:
        for c in sets:
            for f in universe.hom(a, c):
                if not S.contains(f):
                    continue
                for b in sets:
                    for g in universe.hom(b, c):
                        pulled = pullback(f, g).p2
                        if not S.contains(pulled):
                            violations.append(Violation(
                                "pullback_stability",
                                f"pullback of {f!r} along {g!r} is not small",
                                {"small": repr(f), "along": repr(g)},
                            ))
    return violations


def validate_smallness(S: Smallness, require_pullbacks: bool = False) -> list[Violation]:
    """
    Every violated closure axiom, with witnesses

    Pullback stability is checked along morphisms whose pullbacks exist;
    with require_pullbacks a missing pullback raises instead of being
    skipped.
    """
    if isinstance(S, FunctionClass):
        violations = _universe_violations(S)
    else:
        violations = _table_violations(S, require_pullbacks)
    logger.debug("smallness_validated", predicate=S.name, violations=len(violations))
    return violations


def check_smallness(S: Smallness, require_pullbacks: bool = False) -> CheckOutcome:
    violations = validate_smallness(S, require_pullbacks)
    bounded = isinstance(S, FunctionClass)
    outcome = CheckOutcome(
        check="smallness",
        target=S.name,
        holds=not violations,
        exact=not bounded,
        bound=S.universe.bound if bounded else None,
    )
    laws = sorted({v.law for v in violations})
    outcome.details["violated_axioms"] = laws
    if violations:
        outcome.counterexample = violations[0].to_dict()
        outcome.witnesses = [v.to_dict() for v in violations]
    return outcome
