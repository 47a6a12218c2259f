import logging

import numpy as np
import pytest

from specband.dyadic import BumpProfile, make_system
from specband.grid import make_grid
from specband.operator import hermite_decomposition

# lines collected by the acceptance module, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def herm_small():
    """Hermite on a coarse box: cheap, accurate for the low modes."""
    return hermite_decomposition(make_grid(1, 8.0, 256))


@pytest.fixture(scope="session")
def herm_full():
    return hermite_decomposition(make_grid(1, 12.0, 1024))


@pytest.fixture(scope="session")
def system():
    return make_system(BumpProfile(), 0, 8)


@pytest.fixture(scope="session")
def system_l2():
    return make_system(BumpProfile(), 0, 8, normalize="l2")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def _quiet_warnings():
    logging.getLogger("specband").setLevel(logging.ERROR)
    yield


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
