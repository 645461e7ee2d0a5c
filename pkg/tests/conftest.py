import pytest

from polarium.rootdata import build


@pytest.fixture(scope="session")
def a1():
    return build("A1")


@pytest.fixture(scope="session")
def a2():
    return build("A2")


@pytest.fixture(scope="session")
def a3():
    return build("A3")


@pytest.fixture(scope="session")
def b2():
    return build("B2")


@pytest.fixture(scope="session")
def g2():
    return build("G2")
