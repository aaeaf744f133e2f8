import pytest

from mcg import load_model


@pytest.fixture(scope="session")
def sn17():
    return load_model("sn", 17)


@pytest.fixture(scope="session")
def sn16():
    return load_model("sn", 16)


@pytest.fixture(scope="session")
def jacob():
    return load_model("jacob")


@pytest.fixture(scope="session")
def lochness():
    return load_model("lochness")
