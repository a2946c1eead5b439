"""
Tests for spans in Fam(C), choice spans and the fibrational Isbell checks
"""
from dataclasses import replace
from itertools import product

import pytest

from src.core.category.finset import FinFn, canonical, identity
from src.core.category.spans import isbell_report
from src.core.category.universe import FinSetUniverse
from src.core.errors import EndpointMismatchError, ShapeMismatchError
from src.core.fibration.smallness import FunctionClass
from src.core.internal.externalization import FamMorphism, externalize, family
from src.core.internal.internal_category import internalize
from src.core.isbell.choice_spans import (
    expected_small_fib_size,
    fam_choice_span,
    small_fib_choice_span,
    verify_small_fib_isbell,
)
from src.core.isbell.pspans import (
    PSpan,
    all_pspans,
    check_cloven_form,
    check_fib_isbell,
    check_mediating_form,
    pspans_equivalent,
)


def point_families(C, a, b):
    point = canonical(1)
    return family(C, point, (a,)), family(C, point, (b,))


def point_span(E, A, B, left, right):
    """The 1-indexed span (left, A's object, right) over id_1"""
    C = E.category
    point = canonical(1)
    X = family(C, point, (C.d0(left),))
    return PSpan(
        E,
        FamMorphism(C, X, A, identity(point), FinFn(point, C.C1, (left,))),
        X,
        FamMorphism(C, X, B, identity(point), FinFn(point, C.C1, (right,))),
    )


class TestSpanEquivalence:
    @pytest.mark.parametrize("stable", [False, True])
    def test_classes_on_points(self, Z2_internal, stable):
        E = externalize(Z2_internal, 1)
        A, B = point_families(Z2_internal, "x", "x")
        base = point_span(E, A, B, "id_x", "id_x")
        assert pspans_equivalent(E, base, point_span(E, A, B, "s", "s"), stable=stable)
        assert not pspans_equivalent(E, base, point_span(E, A, B, "id_x", "s"), stable=stable)

    def test_different_endpoints(self, Arr_internal):
        E = externalize(Arr_internal, 1)
        A, B = point_families(Arr_internal, "b", "b")
        A2, _ = point_families(Arr_internal, "a", "b")
        with pytest.raises(EndpointMismatchError):
            pspans_equivalent(E, point_span(E, A, B, "u", "u"), point_span(E, A2, B, "id_a", "u"))

    def test_legs_must_project_alike(self, Z2_internal):
        E = externalize(Z2_internal, 2)
        I = canonical(2)
        X = family(Z2_internal, I, ("x", "x"))
        components = FinFn(I, Z2_internal.C1, ("id_x", "id_x"))
        swap = FinFn(I, I, (1, 0))
        with pytest.raises(ShapeMismatchError):
            PSpan(
                E,
                FamMorphism(Z2_internal, X, X, identity(I), components),
                X,
                FamMorphism(Z2_internal, X, X, swap, components),
            )


class TestFamChoiceSpan:
    @pytest.mark.parametrize("name", ["D2", "Arr", "Z2", "Iso2"])
    def test_sigma_holds_one_span_per_class(self, name, request):
        C = request.getfixturevalue(name)
        internal = internalize(C)
        sizes = isbell_report(C).sizes()
        for a, b in product(C.objects, repeat=2):
            data = fam_choice_span(C, *point_families(internal, a, b))
            assert len(data.sigma) == sizes[(a, b)]

    @pytest.mark.parametrize("name", ["D2", "Arr", "Z2", "Iso2"])
    def test_passes_the_isbell_check_on_points(self, name, request):
        C = request.getfixturevalue(name)
        E = externalize(internalize(C), 1)
        for a, b in product(C.objects, repeat=2):
            A, B = point_families(E.category, a, b)
            outcome = check_fib_isbell(E, fam_choice_span(C, A, B), A, B)
            assert outcome.holds, outcome.counterexample

    def test_theta_is_unique_up_to_vertical_iso(self, Z2):
        E = externalize(internalize(Z2), 2)
        A, B = point_families(E.category, "x", "x")
        outcome = check_fib_isbell(E, fam_choice_span(Z2, A, B), A, B)
        assert outcome.holds
        assert outcome.details["theta_not_unique_on_the_nose"] > 0
        assert any("vertical isomorphisms" in note for note in outcome.notes)

    @pytest.mark.parametrize("name", ["Arr", "Z2"])
    def test_classify_gives_an_equivalent_cartesian_theta(self, name, request):
        C = request.getfixturevalue(name)
        E = externalize(internalize(C), 1)
        for a, b in product(C.objects, repeat=2):
            A, B = point_families(E.category, a, b)
            data = fam_choice_span(C, A, B)
            for span in all_pspans(E, A, B, bound=1):
                theta = data.classify(span)
                assert E.exact_cartesian(theta)
                composite = PSpan(E, E.compose(theta, data.left), theta.source, E.compose(theta, data.right))
                assert pspans_equivalent(E, span, composite, stable=True)

    def test_projection_must_be_small(self, Z2):
        E = externalize(internalize(Z2), 1)
        A, B = point_families(E.category, "x", "x")
        isos = FunctionClass(FinSetUniverse(1), "isomorphisms")
        outcome = check_fib_isbell(E, fam_choice_span(Z2, A, B), A, B, smallness=isos)
        assert outcome.counterexample["reason"] == "projection_not_small"

    def test_representatives_miss_the_mediating_form(self, Z2):
        E = externalize(internalize(Z2), 1)
        A, B = point_families(E.category, "x", "x")
        outcome = check_mediating_form(E, fam_choice_span(Z2, A, B), A, B)
        assert not outcome.holds
        assert outcome.counterexample["reason"] == "no_mediator"


class TestSmallFibChoiceSpan:
    def test_sigma_counts_every_span(self, any_internal):
        for a, b in product(any_internal.C0, repeat=2):
            data = small_fib_choice_span(any_internal, canonical(1), *(
                FinFn(canonical(1), any_internal.C0, (x,)) for x in (a, b)
            ))
            assert len(data.sigma) == expected_small_fib_size(any_internal, a, b)
            assert data.details["fiber_sizes"] == {0: len(data.sigma)}

    @pytest.mark.parametrize("name, a, b", [
        ("Z2_internal", "x", "x"),
        ("Arr_internal", "a", "b"),
        ("Arr_internal", "b", "b"),
        ("D2_internal", "a", "b"),
        ("Par_internal", "a", "b"),
        ("Iso2_internal", "a", "b"),
    ])
    def test_verified_on_points(self, name, a, b, request):
        C = request.getfixturevalue(name)
        point = canonical(1)
        outcome = verify_small_fib_isbell(
            C, point, FinFn(point, C.C0, (a,)), FinFn(point, C.C0, (b,)), bound=2,
        )
        assert outcome.holds, outcome.counterexample
        assert outcome.check == "small_fib_isbell"
        assert outcome.details["factorizations"] == outcome.details["queries"]

    @pytest.mark.slow
    @pytest.mark.parametrize("name, a, b", [
        ("D2_internal", "a", "b"),
        ("Z2_internal", "x", "x"),
        ("Arr_internal", "a", "b"),
        ("Par_internal", "a", "b"),
    ])
    def test_verified_on_points_at_bound_three(self, name, a, b, request):
        C = request.getfixturevalue(name)
        point = canonical(1)
        outcome = verify_small_fib_isbell(
            C, point, FinFn(point, C.C0, (a,)), FinFn(point, C.C0, (b,)), bound=3,
        )
        assert outcome.holds, outcome.counterexample
        assert outcome.bound == 3
        assert outcome.details["factorizations"] == outcome.details["queries"]

    @pytest.mark.slow
    def test_verified_on_a_two_element_index(self, Z2_internal):
        I = canonical(2)
        A = FinFn(I, Z2_internal.C0, ("x", "x"))
        outcome = verify_small_fib_isbell(Z2_internal, I, A, A, bound=2)
        assert outcome.holds
        assert outcome.status.value == "pass"

    @pytest.mark.parametrize("name, a, b", [("Z2_internal", "x", "x"), ("Arr_internal", "a", "b")])
    def test_cloven_form(self, name, a, b, request):
        C = request.getfixturevalue(name)
        E = externalize(C, 2)
        A, B = point_families(C, a, b)
        data = small_fib_choice_span(C, A.index, A.family, B.family)
        outcome = check_cloven_form(E, data, A, B)
        assert outcome.holds, outcome.counterexample
        assert outcome.details["instances"] > 0

    def test_mediating_form_needs_the_vertical_span(self, Z2_internal):
        E = externalize(Z2_internal, 1)
        A, B = point_families(Z2_internal, "x", "x")
        data = replace(small_fib_choice_span(Z2_internal, A.index, A.family, B.family), vertical=None)
        with pytest.raises(ShapeMismatchError):
            check_mediating_form(E, data, A, B)
