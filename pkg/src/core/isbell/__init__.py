"""
Isbell Module

The fibrational Isbell condition and the concreteness of externalizations:
- pspans: spans in a fibration, their equivalence and the Isbell checks
- choice_spans: choice spans of Fam(C)
- concreteness: the faithful diagram built from finite limits
- fam_sets: constructs versus concrete externalizations
"""

from .choice_spans import fam_choice_span, small_fib_choice_span, verify_small_fib_isbell
from .concreteness import check_concreteness, concreteness_diagram, sigma_fibered_functor
from .fam_sets import extend_to_fam, fam_construct_equivalence, restrict_to_points
from .pspans import ChoiceSpanData, PSpan, check_cloven_form, check_fib_isbell, check_mediating_form, pspans_equivalent

__all__ = [
    "fam_choice_span",
    "small_fib_choice_span",
    "verify_small_fib_isbell",
    "check_concreteness",
    "concreteness_diagram",
    "sigma_fibered_functor",
    "extend_to_fam",
    "fam_construct_equivalence",
    "restrict_to_points",
    "ChoiceSpanData",
    "PSpan",
    "check_cloven_form",
    "check_fib_isbell",
    "check_mediating_form",
    "pspans_equivalent",
]
