"""
Internal Categories

Categories whose objects and morphisms form finite sets, their diagrams,
and the externalization Fam(C) over finite sets.
"""

from .externalization import Externalization, FamMorphism, FamObject, externalize
from .internal_category import (
    InternalCategory,
    InternalDiagram,
    RawInternalCategory,
    canonical_faithful_diagram,
    internalize,
    validate_internal_category,
    validate_internal_diagram,
)

__all__ = [
    "Externalization",
    "FamMorphism",
    "FamObject",
    "externalize",
    "InternalCategory",
    "InternalDiagram",
    "RawInternalCategory",
    "canonical_faithful_diagram",
    "internalize",
    "validate_internal_category",
    "validate_internal_diagram",
]
