"""
Category Module

Finite categories and the finite-set constructions beneath them:
- finset: finite sets, functions and their limits
- fincat: finite categories, validation, functors and pullbacks
- spans: span equivalence, choice sets and concretization
- universe: the bounded universe of finite sets
"""

from .fincat import FinCategory, FinFunctor, RawCategory, SetFunctor, validate_category, validate_functor
from .finset import FinFn, FinSetObj
from .spans import ChoiceSet, IsbellReport, Span, choice_set, concretize, isbell_report, spans_equivalent
from .universe import FinSetUniverse, finset_category

__all__ = [
    "FinCategory",
    "FinFunctor",
    "RawCategory",
    "SetFunctor",
    "validate_category",
    "validate_functor",
    "FinFn",
    "FinSetObj",
    "ChoiceSet",
    "IsbellReport",
    "Span",
    "choice_set",
    "concretize",
    "isbell_report",
    "spans_equivalent",
    "FinSetUniverse",
    "finset_category",
]
