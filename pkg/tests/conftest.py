import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ddtkit import S1, Gaussian, GaussianPulse, UnitImpulse, make_grid, synthesize  # noqa: E402

PAPER_STEP = 20 / 512


@pytest.fixture(scope="session")
def paper_grid():
    return make_grid(-10, PAPER_STEP, 512)


@pytest.fixture(scope="session")
def gauss():
    return Gaussian(1.0)


@pytest.fixture(scope="session")
def s1(paper_grid):
    return synthesize(S1, paper_grid)


@pytest.fixture(scope="session")
def pulse(paper_grid):
    return synthesize(GaussianPulse(1.0), paper_grid)


@pytest.fixture(scope="session")
def impulse(paper_grid):
    return synthesize(UnitImpulse(0.0), paper_grid)
