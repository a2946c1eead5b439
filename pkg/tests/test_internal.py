"""
Tests for internal categories and internal diagrams
"""
import pytest

from src.core.category.finset import FinFn
from src.core.errors import (
    InternalConsistencyError,
    LawViolationError,
    NotComposableError,
    PartialityError,
    UndefinedIdError,
)
from src.core.internal.internal_category import (
    RawInternalCategory,
    act,
    canonical_faithful_diagram,
    diagram_violations,
    externalize_points,
    faithfulness_counterexample,
    internal_category_violations,
    internalize,
    is_faithful_diagram,
    is_faithful_diagram_at_stage,
    terminal_diagram,
    validate_internal_category,
)


def two_endos(c: dict[tuple[str, str], str]) -> RawInternalCategory:
    """One object x, morphisms e (identity), s and t; c keyed (g, f) for g∘f"""
    table = {("e", "e"): "e"}
    for m in ("s", "t"):
        table[("e", m)] = m
        table[(m, "e")] = m
    table.update(c)
    return RawInternalCategory(
        C0=["x"],
        C1=["e", "s", "t"],
        d0={"e": "x", "s": "x", "t": "x"},
        d1={"e": "x", "s": "x", "t": "x"},
        c=table,
        i={"x": "e"},
        name="M3",
    )


class TestValidation:
    def test_fixtures_internalize(self, any_category):
        C = internalize(any_category)
        assert len(C.C0) == len(any_category.objects)
        assert len(C.C1) == len(any_category.morphism_ids)

    def test_externalize_points_round_trip(self, any_category):
        assert externalize_points(internalize(any_category)) == any_category

    def test_associativity_violation(self):
        # s;s = t, s;t = t, t;s = s, t;t = t read as g∘f
        broken = two_endos({("s", "s"): "t", ("t", "s"): "t", ("s", "t"): "s", ("t", "t"): "t"})
        with pytest.raises(LawViolationError) as error:
            validate_internal_category(broken)
        assert {v.law for v in error.value.violations} == {"associativity"}

    def test_unit_violation(self):
        broken = two_endos({("s", "s"): "s", ("t", "t"): "t", ("s", "t"): "t", ("t", "s"): "s"})
        broken.c[("e", "s")] = "e"
        laws = {v.law for v in internal_category_violations(broken)}
        assert "left_unit" in laws

    def test_missing_composite(self):
        table = two_endos({("s", "s"): "s", ("t", "t"): "t", ("s", "t"): "t"})
        with pytest.raises(PartialityError) as error:
            validate_internal_category(table)
        assert error.value.violations[0].witness == {"g": "t", "f": "s"}

    def test_dangling_element(self):
        table = two_endos({("s", "s"): "s", ("t", "t"): "t", ("s", "t"): "t", ("t", "s"): "s"})
        table.d0["s"] = "y"
        with pytest.raises(UndefinedIdError) as error:
            validate_internal_category(table)
        assert error.value.identifier == "y"

    def test_composition_needs_matching_ends(self, Arr_internal):
        assert Arr_internal.compose_elements("u", "id_a") == "u"
        assert Arr_internal.then("id_a", "u") == "u"
        with pytest.raises(NotComposableError):
            Arr_internal.compose_elements("u", "u")

    def test_isomorphisms(self, Iso2_internal, Z2_internal):
        assert Iso2_internal.inverse_elements("f") == ["g"]
        assert Z2_internal.is_iso_element("s")


class TestDiagrams:
    def test_canonical_diagram_is_faithful(self, any_internal):
        D = canonical_faithful_diagram(any_internal)
        assert is_faithful_diagram(any_internal, D)
        assert is_faithful_diagram_at_stage(any_internal, D, 2)

    def test_action_is_postcomposition(self, Arr_internal):
        D = canonical_faithful_diagram(Arr_internal)
        assert act(D, "u", "id_a") == "u"
        assert act(D, "id_b", "u") == "u"
        with pytest.raises(NotComposableError):
            act(D, "u", "id_b")

    def test_terminal_diagram_separates_only_thin_categories(self, Arr_internal, Z2_internal):
        assert is_faithful_diagram(Arr_internal, terminal_diagram(Arr_internal))
        D = terminal_diagram(Z2_internal)
        assert faithfulness_counterexample(Z2_internal, D) == {"f": "id_x", "g": "s"}
        assert not is_faithful_diagram_at_stage(Z2_internal, D, 1)

    def test_broken_action_reported(self, Z2_internal):
        D = canonical_faithful_diagram(Z2_internal)
        constant = FinFn(D.q.dom, D.q.cod, tuple("id_x" for _ in D.q.dom))
        laws = {v.law for v in diagram_violations(Z2_internal, D.F, D.p, constant)}
        assert laws == {"action_unit"}

    def test_wrong_shape_reported(self, Z2_internal):
        D = canonical_faithful_diagram(Z2_internal)
        assert diagram_violations(Z2_internal, D.F, D.p, D.p)[0].law == "shape"

    def test_non_faithful_canonical_diagram_is_a_bug(self, Z2_internal, monkeypatch):
        import src.core.internal.internal_category as module

        monkeypatch.setattr(module, "faithfulness_counterexample", lambda C, D: {"f": "id_x", "g": "s"})
        with pytest.raises(InternalConsistencyError):
            canonical_faithful_diagram(Z2_internal)
