import os
import sys

import numpy as np
import pytest

import qgame
from qgame.extensive import normal_representation, selten_horse

DATA = os.path.join(os.path.dirname(qgame.__file__), "data")


@pytest.fixture
def horse():
    return selten_horse()


@pytest.fixture
def horse_nf(horse):
    return normal_representation(horse)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def horse_file():
    return os.path.join(DATA, "horse.game")


@pytest.fixture
def twostage_file():
    return os.path.join(DATA, "twostage.game")



def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
