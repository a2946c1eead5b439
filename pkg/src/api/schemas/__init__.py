from .document import *
from .report import *

__all__ = [
    "SourceSpan",
    "MorphismDecl",
    "CategoryDecl",
    "InternalDecl",
    "FamilyDecl",
    "SmallnessDecl",
    "CheckDirective",
    "SpecDocument",
    "CheckReport",
    "RunReport",
    "to_jsonable",
]
