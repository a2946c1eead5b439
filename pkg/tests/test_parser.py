"""
Tests for the .fib parser, printer and loader
"""
from pathlib import Path

import pytest

from src.core.category.finset import FinSetObj, canonical
from src.core.errors import LawViolationError, SpecSyntaxError, UnresolvedReferenceError
from src.core.fibration.smallness import FunctionClass, SmallnessPredicate
from src.dsl import load, parse, print_document
from src.dsl.loader import family_index

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


class TestParse:
    def test_arrow_document(self):
        doc = parse(fixture_text("arrow.fib"))
        assert [c.name for c in doc.categories] == ["Arr"]
        Arr = doc.categories[0]
        assert [m.name for m in Arr.morphisms] == ["id_a", "id_b", "u"]
        assert ("id_a", "u", "u") in Arr.compose
        assert doc.families[0].over == "Arr"
        assert doc.families[0].assign == {"0": "a", "1": "b"}
        assert [(s.name, s.rule, s.members) for s in doc.smallness] == [
            ("All", "all", []),
            ("Isos", None, ["id_a", "id_b"]),
        ]
        assert [d.directive for d in doc.checks] == ["validate", "isbell-check", "concretize"]

    def test_internal_document(self):
        doc = parse(fixture_text("z2.fib"))
        Z2 = doc.internals[0]
        assert Z2.C1 == ["e", "s"]
        assert ("s", "s", "e") in Z2.c
        assert doc.smallness[0].over == "finsets"
        assert doc.smallness[0].universe == 2
        check = doc.checks[1]
        assert (check.directive, check.args, check.bound) == ("fib-isbell", ["Z2", "A", "A"], 2)
        assert doc.checks[2].bound is None

    def test_names_by_kind(self):
        doc = parse(fixture_text("z2.fib"))
        assert doc.names() == {"Z2": "internal", "A": "family", "Inj": "smallness"}

    def test_hyphenated_identifiers(self):
        doc = parse("category one-point { objects = { * } morphisms = { id* : * -> * } }")
        assert doc.categories[0].name == "one-point"
        assert doc.categories[0].objects == ["*"]


class TestParseErrors:
    def test_unexpected_character(self):
        with pytest.raises(SpecSyntaxError) as error:
            parse("category Arr {\n  objects = { a; b }\n}")
        assert (error.value.line, error.value.column) == (2, 16)

    def test_unclosed_block(self):
        with pytest.raises(SpecSyntaxError):
            parse("category Arr {\n  objects = { a, b }\n")

    def test_dangling_endpoint(self):
        text = "category Arr {\n  objects = { a, b }\n  morphisms = { u : a -> c }\n}"
        with pytest.raises(UnresolvedReferenceError) as error:
            parse(text)
        assert error.value.identifier == "c"
        assert error.value.line == 3

    def test_unknown_field(self):
        with pytest.raises(SpecSyntaxError, match="unknown field"):
            parse("category X { colors = { a } }")

    def test_duplicate_field(self):
        with pytest.raises(SpecSyntaxError, match="duplicate field"):
            parse("category X { objects = { a } objects = { b } }")

    def test_entry_shape(self):
        with pytest.raises(SpecSyntaxError, match="objects expects bare"):
            parse("category X { objects = { a -> b } }")

    def test_family_needs_a_target(self):
        with pytest.raises(SpecSyntaxError, match="needs 'over TARGET'"):
            parse("family F { index = { 0 } }")

    def test_category_takes_no_target(self):
        with pytest.raises(SpecSyntaxError, match="no 'over' clause"):
            parse("category X over Y { objects = { a } }")

    def test_check_arguments_resolve(self):
        with pytest.raises(UnresolvedReferenceError) as error:
            parse(fixture_text("arrow.fib") + "check isbell-check Nope\n")
        assert error.value.identifier == "Nope"

    def test_declared_twice(self):
        with pytest.raises(SpecSyntaxError, match="declared twice"):
            parse("category X { objects = { a } }\ninternal X { C0 = { a } }")

    def test_bound_must_be_a_number(self):
        with pytest.raises(SpecSyntaxError, match="bound must be a number"):
            parse(fixture_text("arrow.fib") + "check isbell-check Arr bound two\n")


class TestPrinter:
    @pytest.mark.parametrize("name", ["arrow.fib", "z2.fib", "invalid.fib"])
    def test_round_trip(self, name):
        doc = parse(fixture_text(name))
        printed = print_document(doc)
        assert parse(printed).model_dump() == doc.model_dump()
        assert print_document(parse(printed)) == printed

    def test_canonical_layout(self):
        printed = print_document(parse(fixture_text("z2.fib")))
        assert printed.startswith("internal Z2 {\n  C0 = { x }\n")
        assert "smallness Inj over finsets {\n  rule = { injective }\n  universe = { 2 }\n}" in printed
        assert printed.endswith("check smallness-check Inj\n")

    def test_empty_field(self):
        printed = print_document(parse("category E { }"))
        assert "  objects = { }" in printed


class TestLoader:
    def test_family_index(self):
        assert family_index(["0", "1"])[0] == canonical(2)
        index, element_of = family_index(["p", "q"])
        assert index == FinSetObj(("p", "q"))
        assert element_of["q"] == "q"

    def test_declarations_seal(self):
        ws = load(parse(fixture_text("arrow.fib")), bound=2)
        assert ws.invalid == {}
        assert ws.category("Arr").morphism_ids == ("id_a", "id_b", "u")
        assert ws.family("Ends").family.values == ("a", "b")
        assert isinstance(ws.small("Isos"), SmallnessPredicate)
        assert ws.kind("Ends") == "family"

    def test_finite_set_smallness(self):
        ws = load(parse(fixture_text("z2.fib")), bound=3)
        Inj = ws.small("Inj")
        assert isinstance(Inj, FunctionClass)
        assert Inj.universe.bound == 2

    def test_invalid_declarations_are_recorded(self):
        ws = load(parse(fixture_text("invalid.fib")), bound=2)
        assert "Broken" in ws.invalid
        with pytest.raises(LawViolationError):
            ws.category("Broken")

    def test_unknown_names(self):
        ws = load(parse(fixture_text("arrow.fib")), bound=2)
        with pytest.raises(UnresolvedReferenceError):
            ws.kind("Nope")
