"""
Tests for finite categories, functors and pullbacks
"""
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from src.core.category.fincat import (
    CategoryPullback,
    RawCategory,
    category_violations,
    faithfulness_witness,
    functor_violations,
    find_pullback,
    hom,
    identity_functor,
    is_faithful,
    is_pullback_cone,
    missing_pullbacks,
    opposite,
    to_raw,
    validate_category,
    validate_functor,
)
from src.core.errors import LawViolationError, PartialityError, UndefinedIdError, UnknownObjectError
from tests.factories import raw
from tests.simulation.generator import CategoryGenerator


def two_endos(table: dict[tuple[str, str], str]) -> RawCategory:
    return raw("M3", ["x"], [("s", "x", "x"), ("t", "x", "x")], table)


def associative(table: dict[tuple[str, str], str]) -> bool:
    """Triple loop over the full table, identities included"""
    full = two_endos(table).compose
    ids = ["id_x", "s", "t"]
    return all(full[(full[(f, g)], h)] == full[(f, full[(g, h)])] for f, g, h in product(ids, repeat=3))


class TestValidation:
    def test_fixtures_are_valid(self, any_category):
        assert category_violations(to_raw(any_category)) == []

    def test_terminal_and_arrow(self, T, Arr):
        assert hom(T, "t", "t") == ["id_t"]
        assert len(Arr.morphisms) == 3

    def test_associativity_violation_reported(self):
        table = {("s", "s"): "t", ("s", "t"): "t", ("t", "s"): "s", ("t", "t"): "t"}
        with pytest.raises(LawViolationError) as error:
            validate_category(two_endos(table))
        laws = {v.law for v in error.value.violations}
        assert laws == {"associativity"}
        assert all(v.witness for v in error.value.violations)

    def test_identity_violation_reported(self):
        table = raw("Z2", ["x"], [("s", "x", "x")], {("s", "s"): "id_x"})
        table.compose[("id_x", "s")] = "id_x"
        laws = {v.law for v in category_violations(table)}
        assert "left_unit" in laws

    def test_dangling_reference(self):
        table = RawCategory(
            objects=["a", "b"],
            morphisms=[("id_a", "a", "a"), ("id_b", "b", "b"), ("u", "a", "c")],
            identity={"a": "id_a", "b": "id_b"},
            compose={("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b"},
            name="Arr",
        )
        with pytest.raises(UndefinedIdError) as error:
            validate_category(table)
        assert error.value.identifier == "c"

    def test_missing_composite_is_partiality(self):
        table = raw("Z2", ["x"], [("s", "x", "x")], {})
        with pytest.raises(PartialityError):
            validate_category(table)

    def test_composite_on_non_composable_pair(self):
        table = raw("Arr", ["a", "b"], [("u", "a", "b")], {("u", "u"): "u"})
        with pytest.raises(PartialityError):
            validate_category(table)

    @pytest.mark.parametrize("values", list(product(["id_x", "s", "t"], repeat=4)))
    def test_agrees_with_brute_force_laws(self, values):
        table = dict(zip([("s", "s"), ("s", "t"), ("t", "s"), ("t", "t")], values))
        assert (category_violations(two_endos(table)) == []) == associative(table)


class TestStructure:
    def test_hom_is_sorted_and_checked(self, Par, D2):
        assert hom(Par, "a", "b") == ["f", "g"]
        assert hom(D2, "a", "b") == []
        with pytest.raises(UnknownObjectError):
            hom(D2, "a", "z")

    def test_opposite(self, T, Arr):
        assert opposite(T) == T
        assert ("u", "b", "a") in opposite(Arr).morphisms

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10_000))
    def test_opposite_is_an_involution(self, seed):
        for C in CategoryGenerator(seed).generate(3):
            assert opposite(opposite(C)) == C
            assert category_violations(to_raw(opposite(C))) == []

    def test_isomorphisms(self, Iso2, Mon2):
        assert Iso2.inverses("f") == ["g"]
        assert not Mon2.is_iso("s")

    def test_describe_composite_shows_both_orders(self, Arr):
        assert Arr.describe_composite("id_a", "u") == "id_a;u = u∘id_a = u"


class TestFunctors:
    def test_identity_functor_is_faithful(self, Arr):
        assert is_faithful(identity_functor(Arr))

    def test_collapsing_a_parallel_pair(self, Par, Arr):
        F = validate_functor(
            Par, Arr,
            {"a": "a", "b": "b"},
            {"id_a": "id_a", "id_b": "id_b", "f": "u", "g": "u"},
        )
        assert not is_faithful(F)
        assert faithfulness_witness(F) == ("f", "g")

    def test_collapsing_objects_can_stay_faithful(self, D2, T):
        F = validate_functor(D2, T, {"a": "t", "b": "t"}, {"id_a": "id_t", "id_b": "id_t"})
        assert is_faithful(F)

    def test_non_functor_rejected(self, Arr):
        with pytest.raises(LawViolationError):
            validate_functor(Arr, Arr, {"a": "b", "b": "a"}, {"id_a": "id_b", "id_b": "id_a", "u": "u"})

    def test_composition_violation_names_both_orders(self, Mon2, Z2):
        violations = functor_violations(Mon2, Z2, {"x": "x"}, {"id_x": "id_x", "s": "s"})
        assert [(v.law, v.message) for v in violations] == [
            ("preserves_composition", "F does not preserve s;s = s∘s = s"),
        ]


class TestPullbacks:
    def test_arrow_kernel_pair(self, Arr):
        assert find_pullback(Arr, "u", "u") == CategoryPullback("a", "id_a", "id_a")
        assert is_pullback_cone(Arr, "u", "u", "id_a", "id_a")

    def test_cospan_without_pullback(self, Cospan3):
        assert find_pullback(Cospan3, "u", "v") is None
        assert missing_pullbacks(Cospan3) == [("u", "v"), ("v", "u")]

    def test_discrete_category_has_all_pullbacks(self, D2):
        assert missing_pullbacks(D2) == []
