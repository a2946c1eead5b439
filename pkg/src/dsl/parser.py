"""
Parser for .fib Documents

A lark LALR grammar reads declaration blocks and check directives into a
generic tree; the builder then checks each block's fields against the
shape its kind expects and resolves every cross-reference, so a parsed
SpecDocument only names things that are declared.

    category NAME { objects = {...} morphisms = {...} identity = {...} compose = {...} }
    internal NAME { C0 = {...} C1 = {...} d0 = {...} d1 = {...} c = {...} i = {...} }
    family NAME over TARGET { index = {...} assign = {...} }
    smallness NAME over TARGET { rule = {...} | members = {...} universe = {...} }
    check DIRECTIVE ARG* [bound N]
"""
from typing import Any, Optional

import structlog
from lark import Lark, Token, Transformer, UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, v_args
from lark.exceptions import VisitError

from ..api.schemas.document import (
    CategoryDecl,
    CheckDirective,
    FamilyDecl,
    InternalDecl,
    MorphismDecl,
    SmallnessDecl,
    SourceSpan,
    SpecDocument,
)
from ..core.errors import SpecSyntaxError, UnresolvedReferenceError

logger = structlog.get_logger()

GRAMMAR = r"""
document: (block | check)*

block: KIND NAME [OVER NAME] "{" field* "}"
field: NAME "=" "{" [entry ("," entry)*] "}"
entry: NAME                              -> bare
     | NAME ":" NAME "->" NAME           -> typed
     | NAME "->" NAME                    -> mapping
     | "(" NAME "," NAME ")" "->" NAME   -> pair_mapping

check: CHECK NAME NAME* [BOUND NAME]

KIND.2: /(category|internal|family|smallness)(?![A-Za-z0-9_*'-])/
OVER.2: /over(?![A-Za-z0-9_*'-])/
CHECK.2: /check(?![A-Za-z0-9_*'-])/
BOUND.2: /bound(?![A-Za-z0-9_*'-])/
NAME: /[A-Za-z0-9_*']+(-[A-Za-z0-9_*']+)*/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

FINSETS = "finsets"

FIELD_SHAPES: dict[str, dict[str, str]] = {
    "category": {"objects": "bare", "morphisms": "typed", "identity": "mapping", "compose": "pair_mapping"},
    "internal": {"C0": "bare", "C1": "bare", "d0": "mapping", "d1": "mapping", "c": "pair_mapping", "i": "mapping"},
    "family": {"index": "bare", "assign": "mapping"},
    "smallness": {"rule": "bare", "members": "bare", "universe": "bare"},
}
NEEDS_OVER = {"family", "smallness"}

_parser = Lark(GRAMMAR, start="document", parser="lalr", propagate_positions=True, maybe_placeholders=True)


def _span(meta: Any) -> SourceSpan:
    return SourceSpan(line=meta.line, column=meta.column, end_line=meta.end_line, end_column=meta.end_column)


def _token_span(token: Token) -> SourceSpan:
    return SourceSpan(
        line=token.line, column=token.column, end_line=token.end_line, end_column=token.end_column,
    )


class _Entry:
    __slots__ = ("shape", "values", "span")

    def __init__(self, shape: str, values: tuple[str, ...], span: SourceSpan):
        self.shape = shape
        self.values = values
        self.span = span


@v_args(meta=True)
class _Builder(Transformer):
    """Tree -> SpecDocument, enforcing per-kind field shapes"""

    def bare(self, meta, children):
        return _Entry("bare", tuple(str(c) for c in children), _span(meta))

    def typed(self, meta, children):
        return _Entry("typed", tuple(str(c) for c in children), _span(meta))

    def mapping(self, meta, children):
        return _Entry("mapping", tuple(str(c) for c in children), _span(meta))

    def pair_mapping(self, meta, children):
        return _Entry("pair_mapping", tuple(str(c) for c in children), _span(meta))

    def field(self, meta, children):
        name, *entries = children
        return name, [e for e in entries if e is not None], _span(meta)

    def block(self, meta, children):
        kind, name, over_keyword, over, *fields = children
        kind = str(kind)
        span = _span(meta)
        if kind in NEEDS_OVER and over is None:
            raise SpecSyntaxError(f"{kind} {name} needs 'over TARGET'", span.line, span.column)
        if kind not in NEEDS_OVER and over is not None:
            raise SpecSyntaxError(f"{kind} {name} takes no 'over' clause", span.line, span.column)

        shapes = FIELD_SHAPES[kind]
        values: dict[str, list[_Entry]] = {}
        for field_name, entries, field_span in fields:
            field_name = str(field_name)
            if field_name not in shapes:
                raise SpecSyntaxError(f"unknown field {field_name!r} in {kind}", field_span.line, field_span.column)
            if field_name in values:
                raise SpecSyntaxError(f"duplicate field {field_name!r}", field_span.line, field_span.column)
            for entry in entries:
                if entry.shape != shapes[field_name]:
                    raise SpecSyntaxError(
                        f"{field_name} expects {shapes[field_name]} entries, got {entry.shape}",
                        entry.span.line, entry.span.column,
                    )
            values[field_name] = entries
        return getattr(self, f"_{kind}")(str(name), None if over is None else str(over), values, span)

    def check(self, meta, children):
        _, directive, *rest = children
        bound_keyword, bound = rest[-2], rest[-1]
        args = [str(a) for a in rest[:-2]]
        bound_value: Optional[int] = None
        if bound is not None:
            if not str(bound).isdigit():
                raise SpecSyntaxError(f"bound must be a number, got {bound!s}", bound.line, bound.column)
            bound_value = int(str(bound))
        return CheckDirective(directive=str(directive), args=args, bound=bound_value, span=_span(meta))

    def document(self, meta, items):
        doc = SpecDocument()
        for item in items:
            if isinstance(item, CategoryDecl):
                doc.categories.append(item)
            elif isinstance(item, InternalDecl):
                doc.internals.append(item)
            elif isinstance(item, FamilyDecl):
                doc.families.append(item)
            elif isinstance(item, SmallnessDecl):
                doc.smallness.append(item)
            else:
                doc.checks.append(item)
        return doc

    # ---- per-kind builders ----

    @staticmethod
    def _bare(values: dict[str, list[_Entry]], key: str) -> list[str]:
        return [e.values[0] for e in values.get(key, [])]

    @staticmethod
    def _mapping(values: dict[str, list[_Entry]], key: str) -> dict[str, str]:
        table: dict[str, str] = {}
        for entry in values.get(key, []):
            source, target = entry.values
            if source in table:
                raise SpecSyntaxError(f"{key} maps {source!r} twice", entry.span.line, entry.span.column)
            table[source] = target
        return table

    @staticmethod
    def _triples(values: dict[str, list[_Entry]], key: str) -> list[tuple[str, str, str]]:
        return [(e.values[0], e.values[1], e.values[2]) for e in values.get(key, [])]

    def _category(self, name, over, values, span):
        morphisms = [
            MorphismDecl(name=e.values[0], dom=e.values[1], cod=e.values[2], span=e.span)
            for e in values.get("morphisms", [])
        ]
        return CategoryDecl(
            name=name,
            objects=self._bare(values, "objects"),
            morphisms=morphisms,
            identity=self._mapping(values, "identity"),
            compose=self._triples(values, "compose"),
            span=span,
        )

    def _internal(self, name, over, values, span):
        return InternalDecl(
            name=name,
            C0=self._bare(values, "C0"),
            C1=self._bare(values, "C1"),
            d0=self._mapping(values, "d0"),
            d1=self._mapping(values, "d1"),
            c=self._triples(values, "c"),
            i=self._mapping(values, "i"),
            span=span,
        )

    def _family(self, name, over, values, span):
        return FamilyDecl(
            name=name,
            over=over,
            index=self._bare(values, "index"),
            assign=self._mapping(values, "assign"),
            span=span,
        )

    def _smallness(self, name, over, values, span):
        rule = self._bare(values, "rule")
        universe = self._bare(values, "universe")
        if len(rule) > 1 or len(universe) > 1:
            raise SpecSyntaxError("rule and universe take a single entry", span.line, span.column)
        if universe and not universe[0].isdigit():
            raise SpecSyntaxError(f"universe must be a number, got {universe[0]!r}", span.line, span.column)
        return SmallnessDecl(
            name=name,
            over=over,
            rule=rule[0] if rule else None,
            members=self._bare(values, "members"),
            universe=int(universe[0]) if universe else None,
            span=span,
        )


# ============= REFERENCE RESOLUTION =============

def _unresolved(identifier: str, span: Optional[SourceSpan]) -> UnresolvedReferenceError:
    if span is None:
        return UnresolvedReferenceError(identifier)
    return UnresolvedReferenceError(identifier, span.line, span.column)


def resolve(doc: SpecDocument) -> SpecDocument:
    """Raise UnresolvedReferenceError at the first identifier naming nothing"""
    seen: set[str] = set()
    for decl in [*doc.categories, *doc.internals, *doc.families, *doc.smallness]:
        if decl.name in seen:
            raise SpecSyntaxError(f"{decl.name!r} declared twice", decl.span.line, decl.span.column)
        seen.add(decl.name)

    objects_of: dict[str, set[str]] = {}
    morphisms_of: dict[str, set[str]] = {}
    for cat in doc.categories:
        objects = set(cat.objects)
        for m in cat.morphisms:
            for endpoint in (m.dom, m.cod):
                if endpoint not in objects:
                    raise _unresolved(endpoint, m.span)
        morphisms = {m.name for m in cat.morphisms}
        for obj, m in cat.identity.items():
            for identifier, pool in ((obj, objects), (m, morphisms)):
                if identifier not in pool:
                    raise _unresolved(identifier, cat.span)
        for triple in cat.compose:
            for identifier in triple:
                if identifier not in morphisms:
                    raise _unresolved(identifier, cat.span)
        objects_of[cat.name], morphisms_of[cat.name] = objects, morphisms

    for internal in doc.internals:
        C0, C1 = set(internal.C0), set(internal.C1)
        for table in (internal.d0, internal.d1):
            for f, x in table.items():
                if f not in C1:
                    raise _unresolved(f, internal.span)
                if x not in C0:
                    raise _unresolved(x, internal.span)
        for x, f in internal.i.items():
            if x not in C0:
                raise _unresolved(x, internal.span)
            if f not in C1:
                raise _unresolved(f, internal.span)
        for triple in internal.c:
            for identifier in triple:
                if identifier not in C1:
                    raise _unresolved(identifier, internal.span)
        objects_of[internal.name], morphisms_of[internal.name] = C0, C1

    for fam in doc.families:
        if fam.over not in objects_of:
            raise _unresolved(fam.over, fam.span)
        for i, x in fam.assign.items():
            if i not in fam.index:
                raise _unresolved(i, fam.span)
            if x not in objects_of[fam.over]:
                raise _unresolved(x, fam.span)

    for small in doc.smallness:
        if small.over == FINSETS:
            continue
        if small.over not in morphisms_of:
            raise _unresolved(small.over, small.span)
        for m in small.members:
            if m not in morphisms_of[small.over]:
                raise _unresolved(m, small.span)

    for directive in doc.checks:
        for arg in directive.args:
            if arg not in seen:
                raise _unresolved(arg, directive.span)
    return doc


def parse(text: str) -> SpecDocument:
    """Text -> resolved SpecDocument; SpecSyntaxError / UnresolvedReferenceError on bad input"""
    try:
        tree = _parser.parse(text)
    except UnexpectedEOF:
        lines = text.splitlines() or [""]
        raise SpecSyntaxError("unexpected end of input", len(lines), len(lines[-1]) + 1) from None
    except UnexpectedCharacters as error:
        raise SpecSyntaxError(f"unexpected character {text[error.pos_in_stream]!r}", error.line, error.column) from None
    except UnexpectedInput as error:
        raise SpecSyntaxError(f"unexpected input: {error.token!s}" if hasattr(error, "token") else "unexpected input",
                              error.line, error.column) from None
    try:
        doc = _Builder().transform(tree)
    except VisitError as error:
        raise error.orig_exc from None
    doc = resolve(doc)
    logger.debug(
        "document_parsed",
        categories=len(doc.categories),
        internals=len(doc.internals),
        families=len(doc.families),
        checks=len(doc.checks),
    )
    return doc
