"""
Builders for the named fixture categories
"""
from src.core.category.fincat import FinCategory, RawCategory, validate_category


def raw(
    name: str,
    objects: list[str],
    arrows: list[tuple[str, str, str]],
    table: dict[tuple[str, str], str],
) -> RawCategory:
    """Raw tables with identities id_x and their composites filled in"""
    ids = {x: f"id_{x}" for x in objects}
    morphisms = [(m, x, x) for x, m in ids.items()] + list(arrows)
    dom = {m: d for m, d, _ in morphisms}
    cod = {m: c for m, _, c in morphisms}
    compose = dict(table)
    for m, d, c in morphisms:
        compose[(ids[d], m)] = m
        compose[(m, ids[c])] = m
    return RawCategory(objects=objects, morphisms=morphisms, identity=ids, compose=compose, name=name)


def build(name, objects, arrows=(), table=None) -> FinCategory:
    return validate_category(raw(name, objects, list(arrows), table or {}))


def terminal_category() -> FinCategory:
    return build("T", ["t"])


def arrow_category() -> FinCategory:
    return build("Arr", ["a", "b"], [("u", "a", "b")])


def discrete_two() -> FinCategory:
    return build("D2", ["a", "b"])


def parallel_pair() -> FinCategory:
    return build("Par", ["a", "b"], [("f", "a", "b"), ("g", "a", "b")])


def cyclic_two() -> FinCategory:
    """Z/2: s∘s = id"""
    return build("Z2", ["x"], [("s", "x", "x")], {("s", "s"): "id_x"})


def cospan_three() -> FinCategory:
    """a -> c <- b with no pullback"""
    return build("Cospan3", ["a", "b", "c"], [("u", "a", "c"), ("v", "b", "c")])


def idempotent_monoid() -> FinCategory:
    """{id, s} with s∘s = s"""
    return build("Mon2", ["x"], [("s", "x", "x")], {("s", "s"): "s"})


def isomorphic_pair() -> FinCategory:
    """a ≅ b through f, g"""
    return build(
        "Iso2",
        ["a", "b"],
        [("f", "a", "b"), ("g", "b", "a")],
        {("f", "g"): "id_a", ("g", "f"): "id_b"},
    )


FIXTURE_CATEGORIES = {
    "T": terminal_category,
    "Arr": arrow_category,
    "D2": discrete_two,
    "Par": parallel_pair,
    "Z2": cyclic_two,
    "Cospan3": cospan_three,
    "Mon2": idempotent_monoid,
    "Iso2": isomorphic_pair,
}
