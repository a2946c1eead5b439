"""
Fibration Module

Functors into a base category, queried through oracles:
- base: the oracle interface and tabulated fibrations
- checks: fibers, cartesian morphisms, fibration checks and cleavages
- fundamental: codomain fibrations over finite categories and finite sets
- smallness: notions of small morphism
- fibered: fibered functors and concrete fibrations
"""

from .base import ComputedFibration, FinCategoryBase, TabulatedFibration, identity_fibration
from .checks import Cleavage, check_cartesian, cleave, fiber, is_cartesian, is_fibration
from .fibered import FiberedFunctor, is_concrete_fibration
from .fundamental import SetsCodomainFibration, codomain_fibration, fundamental_fibration
from .smallness import FunctionClass, SmallnessPredicate, all_small, check_smallness, validate_smallness

__all__ = [
    "ComputedFibration",
    "FinCategoryBase",
    "TabulatedFibration",
    "identity_fibration",
    "Cleavage",
    "check_cartesian",
    "cleave",
    "fiber",
    "is_cartesian",
    "is_fibration",
    "FiberedFunctor",
    "is_concrete_fibration",
    "SetsCodomainFibration",
    "codomain_fibration",
    "fundamental_fibration",
    "FunctionClass",
    "SmallnessPredicate",
    "all_small",
    "check_smallness",
    "validate_smallness",
]
