import pytest

from rkbudget import scenario


@pytest.fixture
def classical():
    return scenario("classical")


@pytest.fixture
def option_pricing():
    return scenario("option_pricing")


@pytest.fixture
def tuned():
    return scenario("tuned")
