import pytest
from hypothesis import HealthCheck, settings

from mops.families import FamilySpec, family_to_weight_system
from mops.pipeline import run_pipeline

settings.register_profile(
    "mops", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("mops")

CHARLIER2 = FamilySpec("charlier", 2, ("1/3", "1/5"))
CHARLIER1 = FamilySpec("charlier", 1, ("1/2",))
CHARLIER3 = FamilySpec("charlier", 3, ("1/3", "1/5", "1/7"))
GEN_CHARLIER2 = FamilySpec("gen-charlier", 2, ("1/4", "1/3"), "1/2")
MEIXNER2 = FamilySpec("meixner2", 2, ("1/4",), None, ("1/3", "2/5"))
GEN_MEIXNER2 = FamilySpec("gen-meixner2", 2, ("1/4",), "1/2", ("1/3", "2/5"))
GEN_MEIXNER3 = FamilySpec("gen-meixner2", 3, ("1/5",), "1/3", ("1/2", "3/4", "5/4"))


def _pipeline(fs, n):
    return run_pipeline(family_to_weight_system(fs), n)


@pytest.fixture(scope="session")
def charlier2():
    return _pipeline(CHARLIER2, 10)


@pytest.fixture(scope="session")
def charlier1():
    return _pipeline(CHARLIER1, 8)


@pytest.fixture(scope="session")
def charlier3():
    return _pipeline(CHARLIER3, 6)


@pytest.fixture(scope="session")
def gen_charlier2():
    return _pipeline(GEN_CHARLIER2, 10)


@pytest.fixture(scope="session")
def meixner2():
    return _pipeline(MEIXNER2, 8)


@pytest.fixture(scope="session")
def gen_meixner2():
    return _pipeline(GEN_MEIXNER2, 8)


@pytest.fixture(scope="session")
def gen_meixner3():
    return _pipeline(GEN_MEIXNER3, 9)
