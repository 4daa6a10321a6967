import pytest

from ecoopinion import preset_scenario


@pytest.fixture(scope="session")
def hawk_dove():
    return preset_scenario("hawk-dove")


@pytest.fixture(scope="session")
def prisoners():
    return preset_scenario("prisoners-dilemma")
