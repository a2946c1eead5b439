"""
Document Loader

Turns a parsed SpecDocument into sealed core structures. Declarations that
fail validation are kept with their error instead of aborting the load:
the validate directive reports them, every other directive that touches
them re-raises.
"""
from dataclasses import dataclass, field
from typing import Union

import structlog

from ..api.schemas.document import CategoryDecl, FamilyDecl, InternalDecl, SmallnessDecl, SpecDocument
from ..core.category.fincat import FinCategory, RawCategory, validate_category
from ..core.category.finset import FinFn, FinSetObj, canonical
from ..core.category.universe import FinSetUniverse
from ..core.errors import FibcatError, ShapeMismatchError, UnresolvedReferenceError
from ..core.fibration.smallness import FunctionClass, Smallness, SmallnessPredicate
from ..core.internal.externalization import FamObject
from ..core.internal.internal_category import (
    InternalCategory,
    RawInternalCategory,
    internalize,
    validate_internal_category,
)
from .parser import FINSETS

logger = structlog.get_logger()

Declaration = Union[CategoryDecl, InternalDecl, FamilyDecl, SmallnessDecl]


def raw_category(decl: CategoryDecl) -> RawCategory:
    return RawCategory(
        objects=list(decl.objects),
        morphisms=[(m.name, m.dom, m.cod) for m in decl.morphisms],
        identity=dict(decl.identity),
        compose={(f, g): h for f, g, h in decl.compose},
        name=decl.name,
    )


def raw_internal(decl: InternalDecl) -> RawInternalCategory:
    return RawInternalCategory(
        C0=list(decl.C0),
        C1=list(decl.C1),
        d0=dict(decl.d0),
        d1=dict(decl.d1),
        c={(g, f): h for g, f, h in decl.c},
        i=dict(decl.i),
        name=decl.name,
    )


def family_index(labels: list[str]) -> tuple[FinSetObj, dict[str, object]]:
    """Labels 0..n-1 become the canonical set, anything else stays a named set"""
    if labels == [str(k) for k in range(len(labels))]:
        return canonical(len(labels)), {str(k): k for k in range(len(labels))}
    return FinSetObj(tuple(labels)), {label: label for label in labels}


def family_object(C: InternalCategory, decl: FamilyDecl) -> FamObject:
    index, element_of = family_index(decl.index)
    missing = [i for i in decl.index if i not in decl.assign]
    if missing:
        raise ShapeMismatchError(f"family {decl.name} leaves {missing[0]!r} unassigned")
    table = {element_of[i]: x for i, x in decl.assign.items()}
    return FamObject(index, FinFn.from_mapping(index, C.C0, table))


@dataclass
class Workspace:
    """Everything a document declares, sealed"""
    document: SpecDocument
    bound: int
    categories: dict[str, FinCategory] = field(default_factory=dict)
    internals: dict[str, InternalCategory] = field(default_factory=dict)
    families: dict[str, FamObject] = field(default_factory=dict)
    smallness: dict[str, Smallness] = field(default_factory=dict)
    invalid: dict[str, FibcatError] = field(default_factory=dict)

    def declaration(self, name: str) -> Declaration:
        for decls in (
            self.document.categories,
            self.document.internals,
            self.document.families,
            self.document.smallness,
        ):
            for decl in decls:
                if decl.name == name:
                    return decl
        raise UnresolvedReferenceError(name)

    def kind(self, name: str) -> str:
        kinds = self.document.names()
        if name not in kinds:
            raise UnresolvedReferenceError(name)
        return kinds[name]

    def _require(self, name: str) -> None:
        if name in self.invalid:
            raise self.invalid[name]

    def category(self, name: str) -> FinCategory:
        self._require(name)
        if name not in self.categories:
            raise UnresolvedReferenceError(name)
        return self.categories[name]

    def internal(self, name: str) -> InternalCategory:
        """Internal declarations, or the internalization of a category"""
        self._require(name)
        if name not in self.internals:
            raise UnresolvedReferenceError(name)
        return self.internals[name]

    def family(self, name: str) -> FamObject:
        self._require(name)
        if name not in self.families:
            raise UnresolvedReferenceError(name)
        return self.families[name]

    def families_over(self, target: str) -> list[str]:
        return [decl.name for decl in self.document.families if decl.over == target]

    def small(self, name: str) -> Smallness:
        self._require(name)
        if name not in self.smallness:
            raise UnresolvedReferenceError(name)
        return self.smallness[name]


def smallness_of(decl: SmallnessDecl, workspace: Workspace) -> Smallness:
    if decl.over == FINSETS:
        universe = FinSetUniverse(decl.universe if decl.universe is not None else workspace.bound)
        return FunctionClass(universe, decl.rule or "all", decl.name)
    C = workspace.category(decl.over)
    if decl.rule == "all":
        members = frozenset(C.morphism_ids)
    elif decl.rule is not None:
        raise ShapeMismatchError(f"smallness over a category takes rule 'all' or members, not {decl.rule!r}")
    else:
        members = frozenset(decl.members)
    return SmallnessPredicate(C, members, decl.name)


def load(doc: SpecDocument, bound: int) -> Workspace:
    """Seal every declaration of doc; invalid ones are recorded, not raised"""
    workspace = Workspace(document=doc, bound=bound)

    def attempt(name: str, build) -> None:
        try:
            build()
        except FibcatError as error:
            logger.warning("declaration_invalid", name=name, error=str(error))
            workspace.invalid[name] = error

    for cat in doc.categories:
        def build_category(cat=cat):
            C = validate_category(raw_category(cat))
            workspace.categories[cat.name] = C
            workspace.internals[cat.name] = internalize(C)
        attempt(cat.name, build_category)

    for internal in doc.internals:
        def build_internal(internal=internal):
            workspace.internals[internal.name] = validate_internal_category(raw_internal(internal))
        attempt(internal.name, build_internal)

    for fam in doc.families:
        def build_family(fam=fam):
            workspace.families[fam.name] = family_object(workspace.internal(fam.over), fam)
        attempt(fam.name, build_family)

    for small in doc.smallness:
        def build_smallness(small=small):
            workspace.smallness[small.name] = smallness_of(small, workspace)
        attempt(small.name, build_smallness)

    logger.info(
        "workspace_loaded",
        categories=len(workspace.categories),
        internals=len(workspace.internals),
        families=len(workspace.families),
        smallness=len(workspace.smallness),
        invalid=sorted(workspace.invalid),
    )
    return workspace
