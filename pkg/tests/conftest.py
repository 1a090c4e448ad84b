import pathlib

import pytest

from stochgames import Subset, extract_support, load_game

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def sec7_game():
    return load_game(FIXTURES / "sec7.json")


@pytest.fixture(scope="session")
def sec7_support(sec7_game):
    return extract_support(sec7_game)


@pytest.fixture(scope="session")
def ex54_game():
    return load_game(FIXTURES / "example54.json")


@pytest.fixture(scope="session")
def ex54_support(ex54_game):
    return extract_support(ex54_game)


@pytest.fixture
def subset_of():
    """Subset builder from labels: subset_of(game, "1", "2")."""

    def build(game_or_support, *labels):
        return Subset.from_labels(labels, game_or_support.states)

    return build
