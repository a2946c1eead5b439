"""
Canonical printer for .fib documents

parse(print_document(doc)) reproduces doc up to source spans.
"""
from ..api.schemas.document import CategoryDecl, CheckDirective, FamilyDecl, InternalDecl, SmallnessDecl, SpecDocument


def _field(name: str, entries: list[str]) -> str:
    body = ", ".join(entries)
    return f"  {name} = {{ {body} }}" if body else f"  {name} = {{ }}"


def _mapping(table: dict[str, str]) -> list[str]:
    return [f"{source} -> {target}" for source, target in table.items()]


def _pairs(triples: list[tuple[str, str, str]]) -> list[str]:
    return [f"({a}, {b}) -> {c}" for a, b, c in triples]


def print_category(decl: CategoryDecl) -> str:
    return "\n".join([
        f"category {decl.name} {{",
        _field("objects", decl.objects),
        _field("morphisms", [f"{m.name} : {m.dom} -> {m.cod}" for m in decl.morphisms]),
        _field("identity", _mapping(decl.identity)),
        _field("compose", _pairs(decl.compose)),
        "}",
    ])


def print_internal(decl: InternalDecl) -> str:
    return "\n".join([
        f"internal {decl.name} {{",
        _field("C0", decl.C0),
        _field("C1", decl.C1),
        _field("d0", _mapping(decl.d0)),
        _field("d1", _mapping(decl.d1)),
        _field("c", _pairs(decl.c)),
        _field("i", _mapping(decl.i)),
        "}",
    ])


def print_family(decl: FamilyDecl) -> str:
    return "\n".join([
        f"family {decl.name} over {decl.over} {{",
        _field("index", decl.index),
        _field("assign", _mapping(decl.assign)),
        "}",
    ])


def print_smallness(decl: SmallnessDecl) -> str:
    lines = [f"smallness {decl.name} over {decl.over} {{"]
    if decl.rule is not None:
        lines.append(_field("rule", [decl.rule]))
    if decl.members:
        lines.append(_field("members", decl.members))
    if decl.universe is not None:
        lines.append(_field("universe", [str(decl.universe)]))
    lines.append("}")
    return "\n".join(lines)


def print_check(directive: CheckDirective) -> str:
    words = ["check", directive.directive, *directive.args]
    if directive.bound is not None:
        words += ["bound", str(directive.bound)]
    return " ".join(words)


def print_document(doc: SpecDocument) -> str:
    blocks = [
        *(print_category(d) for d in doc.categories),
        *(print_internal(d) for d in doc.internals),
        *(print_family(d) for d in doc.families),
        *(print_smallness(d) for d in doc.smallness),
    ]
    checks = [print_check(d) for d in doc.checks]
    text = "\n\n".join(blocks)
    if checks:
        text = f"{text}\n\n" if text else ""
        text += "\n".join(checks)
    return text + "\n"
