import pytest

from procfair.demo import demo_global_procedure, demo_population
from procfair.population import Individual, Population


@pytest.fixture(scope="session")
def demo_pop():
    return demo_population()


@pytest.fixture(scope="session")
def demo_proc():
    return demo_global_procedure()


@pytest.fixture
def four_member_pop():
    # two innocents (one misjudged), two guilty (both correctly judged)
    return Population(
        [
            Individual("a", merit=1, criterion=1),
            Individual("b", merit=1, criterion=0),
            Individual("c", merit=0, criterion=0),
            Individual("d", merit=0, criterion=0),
        ]
    )


@pytest.fixture
def witness_pop():
    # imperfect: the innocents straddle the criterion split
    return Population(
        [
            Individual("a", merit=1, criterion=1),
            Individual("b", merit=1, criterion=0),
            Individual("c", merit=0, criterion=0),
        ]
    )
