"""
Shared fixtures: the small categories every suite is checked against
"""
import pytest

from src.core.category.fincat import FinCategory
from src.core.internal.internal_category import InternalCategory, internalize

from tests.factories import (
    FIXTURE_CATEGORIES,
    arrow_category,
    cospan_three,
    cyclic_two,
    discrete_two,
    idempotent_monoid,
    isomorphic_pair,
    parallel_pair,
    terminal_category,
)


@pytest.fixture
def T() -> FinCategory:
    return terminal_category()


@pytest.fixture
def Arr() -> FinCategory:
    return arrow_category()


@pytest.fixture
def D2() -> FinCategory:
    return discrete_two()


@pytest.fixture
def Par() -> FinCategory:
    return parallel_pair()


@pytest.fixture
def Z2() -> FinCategory:
    return cyclic_two()


@pytest.fixture
def Cospan3() -> FinCategory:
    return cospan_three()


@pytest.fixture
def Mon2() -> FinCategory:
    return idempotent_monoid()


@pytest.fixture
def Iso2() -> FinCategory:
    return isomorphic_pair()


@pytest.fixture(params=sorted(FIXTURE_CATEGORIES))
def any_category(request) -> FinCategory:
    return FIXTURE_CATEGORIES[request.param]()


@pytest.fixture
def T_internal() -> InternalCategory:
    return internalize(terminal_category())


@pytest.fixture
def Z2_internal() -> InternalCategory:
    return internalize(cyclic_two())


@pytest.fixture
def Arr_internal() -> InternalCategory:
    return internalize(arrow_category())


@pytest.fixture
def D2_internal() -> InternalCategory:
    return internalize(discrete_two())


@pytest.fixture
def Iso2_internal() -> InternalCategory:
    return internalize(isomorphic_pair())


@pytest.fixture
def Par_internal() -> InternalCategory:
    return internalize(parallel_pair())


@pytest.fixture(params=["T", "D2", "Z2", "Arr", "Par", "Iso2"])
def any_internal(request) -> InternalCategory:
    return internalize(FIXTURE_CATEGORIES[request.param]())
