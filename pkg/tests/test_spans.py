"""
Tests for spans, choice sets and concretization
"""
from itertools import islice, product

import pytest
from hypothesis import given, settings, strategies as st

from src.core.category.fincat import faithfulness_witness, set_functor_violations
from src.core.category.finset import canonical, identity
from src.core.category.spans import (
    Span,
    all_spans,
    choice_set,
    concretize,
    isbell_report,
    postcompose,
    spans_equivalent,
)
from src.core.category.universe import FinSetUniverse, finset_category
from src.core.errors import EndpointMismatchError, UnknownObjectError
from tests.simulation.generator import CategoryGenerator, GeneratorConfig

SMALL = GeneratorConfig(max_objects=4, max_morphisms=10)


class TestEquivalence:
    def test_reflexive_on_fixtures(self, any_category):
        for a in any_category.objects:
            for b in any_category.objects:
                for span in all_spans(any_category, a, b):
                    assert spans_equivalent(span, span)

    def test_arrow_spans_into_b_collapse(self, Arr):
        assert spans_equivalent(Span(Arr, "id_b", "b", "id_b"), Span(Arr, "u", "a", "u"))

    def test_endpoint_mismatch(self, Arr):
        with pytest.raises(EndpointMismatchError):
            spans_equivalent(Span(Arr, "id_a", "a", "u"), Span(Arr, "id_b", "b", "id_b"))

    def test_span_legs_must_share_apex(self, Arr):
        with pytest.raises(EndpointMismatchError):
            Span(Arr, "id_a", "a", "id_b")

    def test_cyclic_group_classes(self, Z2):
        assert spans_equivalent(Span(Z2, "id_x", "x", "id_x"), Span(Z2, "s", "x", "s"))
        assert not spans_equivalent(Span(Z2, "id_x", "x", "id_x"), Span(Z2, "id_x", "x", "s"))

    def test_postcomposition_preserves_equivalence(self, any_category):
        C = any_category
        for a in C.objects:
            for b in C.objects:
                spans = all_spans(C, a, b)
                for s1 in spans:
                    for s2 in spans:
                        if not spans_equivalent(s1, s2):
                            continue
                        for c in C.objects:
                            for m in C.hom(b, c):
                                assert spans_equivalent(postcompose(s1, m), postcompose(s2, m))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 100_000))
    def test_equivalence_relation_law(self, seed):
        for C in CategoryGenerator(seed, SMALL).generate(3):
            for a, b in product(C.objects, repeat=2):
                spans = list(islice(all_spans(C, a, b), 10))
                related = {(s1, s2): spans_equivalent(s1, s2) for s1 in spans for s2 in spans}
                for s1 in spans:
                    assert related[(s1, s1)]
                    for s2 in spans:
                        assert related[(s1, s2)] == related[(s2, s1)]
                        for s3 in spans:
                            if related[(s1, s2)] and related[(s2, s3)]:
                                assert related[(s1, s3)]


class TestChoiceSets:
    def test_discrete(self, D2):
        assert len(choice_set(D2, "a", "b")) == 0
        assert [s.key for s in choice_set(D2, "a", "a").representatives] == [("a", "id_a", "id_a")]

    def test_arrow_into_b(self, Arr):
        chosen = choice_set(Arr, "b", "b")
        assert len(chosen) == 1
        assert chosen.representatives[0].key == ("a", "u", "u")

    def test_unknown_object(self, Arr):
        with pytest.raises(UnknownObjectError):
            choice_set(Arr, "a", "z")

    def test_isbell_report_sizes(self, T, D2, Z2):
        assert isbell_report(T).sizes() == {("t", "t"): 1}
        assert isbell_report(D2).sizes() == {("a", "a"): 1, ("a", "b"): 0, ("b", "a"): 0, ("b", "b"): 1}
        assert isbell_report(Z2).sizes() == {("x", "x"): 2}

    def test_report_serializes_members(self, Arr):
        pairs = isbell_report(Arr).to_dict()["pairs"]
        assert [p["size"] for p in pairs] == [1, 1, 1, 1]
        assert pairs[3]["classes"][0]["members"] == [
            {"left": "u", "apex": "a", "right": "u"},
            {"left": "id_b", "apex": "b", "right": "id_b"},
        ]

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 100_000))
    def test_every_span_has_exactly_one_representative(self, seed):
        for C in CategoryGenerator(seed, SMALL).generate(3):
            for a, b in product(C.objects, repeat=2):
                chosen = choice_set(C, a, b)
                for span in all_spans(C, a, b):
                    matches = [r for r in chosen.representatives if spans_equivalent(span, r)]
                    assert matches == [chosen.representative_of(span)]


class TestConcretize:
    def test_functor_on_fixtures(self, any_category):
        U = concretize(any_category)
        assert set_functor_violations(U) == []
        assert faithfulness_witness(U) is None

    def test_terminal(self, T):
        U = concretize(T)
        assert len(U.map_object("t")) == 1
        assert U.map_morphism("id_t") == identity(U.map_object("t"))

    def test_arrow_carriers(self, Arr):
        U = concretize(Arr)
        assert len(U.map_object("a")) == 2 and len(U.map_object("b")) == 2
        assert len(set(U.map_morphism("u").values)) == 2

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 100_000))
    def test_generated_categories_are_constructs(self, seed):
        for C in CategoryGenerator(seed, SMALL).generate(3):
            U = concretize(C)
            assert set_functor_violations(U) == []
            assert faithfulness_witness(U) is None


class TestUniverse:
    def test_objects_and_stages(self):
        universe = FinSetUniverse(2)
        assert [len(a) for a in universe.objects()] == [0, 1, 2]
        assert [m.values for m in universe.stages(canonical(2))] == [(0,), (1,)]
        assert universe.exceeds_bound(canonical(3))

    def test_tabulated_sets(self):
        tabulated = finset_category(2)
        assert len(tabulated.category.morphisms) == 11
        swap = tabulated.function("2>2:10")
        assert tabulated.id_of(swap) == "2>2:10"
        assert tabulated.category.compose("2>2:10", "2>2:10") == "2>2:01"
