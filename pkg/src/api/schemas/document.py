"""
Document Schemas

The abstract syntax of a .fib file. Source spans locate declarations for
diagnostics and are excluded from dumps, so two documents are the same
document exactly when their model_dump()s agree.
"""
from typing import Optional

from pydantic import BaseModel, Field


class SourceSpan(BaseModel):
    line: int
    column: int
    end_line: int
    end_column: int


class Located(BaseModel):
    span: Optional[SourceSpan] = Field(None, exclude=True)


class MorphismDecl(Located):
    """name : dom -> cod"""
    name: str
    dom: str
    cod: str


class CategoryDecl(Located):
    name: str
    objects: list[str] = Field(default_factory=list)
    morphisms: list[MorphismDecl] = Field(default_factory=list)
    identity: dict[str, str] = Field(default_factory=dict)
    compose: list[tuple[str, str, str]] = Field(
        default_factory=list, description="(f, g, h) with h = g∘f"
    )


class InternalDecl(Located):
    name: str
    C0: list[str] = Field(default_factory=list)
    C1: list[str] = Field(default_factory=list)
    d0: dict[str, str] = Field(default_factory=dict)
    d1: dict[str, str] = Field(default_factory=dict)
    c: list[tuple[str, str, str]] = Field(
        default_factory=list, description="(g, f, h) with d0 g = d1 f and h = g∘f"
    )
    i: dict[str, str] = Field(default_factory=dict)


class FamilyDecl(Located):
    name: str
    over: str
    index: list[str] = Field(default_factory=list)
    assign: dict[str, str] = Field(default_factory=dict)


class SmallnessDecl(Located):
    """Members of a declared category, or a rule over the finite-set universe"""
    name: str
    over: str
    rule: Optional[str] = None
    members: list[str] = Field(default_factory=list)
    universe: Optional[int] = None


class CheckDirective(Located):
    directive: str
    args: list[str] = Field(default_factory=list)
    bound: Optional[int] = None


class SpecDocument(BaseModel):
    categories: list[CategoryDecl] = Field(default_factory=list)
    internals: list[InternalDecl] = Field(default_factory=list)
    families: list[FamilyDecl] = Field(default_factory=list)
    smallness: list[SmallnessDecl] = Field(default_factory=list)
    checks: list[CheckDirective] = Field(default_factory=list)

    def names(self) -> dict[str, str]:
        """Declared name -> kind"""
        table: dict[str, str] = {}
        for kind, decls in (
            ("category", self.categories),
            ("internal", self.internals),
            ("family", self.families),
            ("smallness", self.smallness),
        ):
            for decl in decls:
                table[decl.name] = kind
        return table
