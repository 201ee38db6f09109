# conftest.py

import random
from fractions import Fraction

import pytest

from sinkhornpoly import ExactMatrix, KruithofTargets

def pytest_addoption(parser: pytest.Parser) -> None:

    parser.addoption(
        "--runslow", action="store_true", default=False,
        help="run the interpolation campaigns"
    )

def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:

    if config.getoption("--runslow"):
        return

    skip = pytest.mark.skip(reason="needs --runslow")

    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)

@pytest.fixture
def sample_3x3() -> ExactMatrix:

    return ExactMatrix.from_rows([[3, 9, 1], [3, 2, 9], [5, 3, 4]])

@pytest.fixture
def sample_2x2() -> ExactMatrix:

    return ExactMatrix.from_rows([[1, 2], [3, 4]])

@pytest.fixture
def sample_4x4() -> ExactMatrix:

    return ExactMatrix.from_rows(
        [[3, 1, 2, 2], [2, 2, 2, 1], [1, 2, 3, 2], [1, 4, 2, 3]]
    )

@pytest.fixture
def degenerate_matrix() -> ExactMatrix:

    return ExactMatrix.from_rows([[4, 5, 6], [1, 2, 3], [2, 4, 6]])

@pytest.fixture
def traffic_matrix() -> ExactMatrix:

    return ExactMatrix.from_rows(
        [
            [2000, 1030, 650, 320],
            [1080, 1110, 555, 255],
            [720, 580, 500, 200],
            [350, 280, 210, 160]
        ]
    )

@pytest.fixture
def traffic_targets() -> KruithofTargets:

    return KruithofTargets(rows=(6000, 4000, 2500, 1000), columns=(6225, 4000, 2340, 935))

@pytest.fixture
def rng() -> random.Random:

    return random.Random(2024)

def rational_matrix(rng: random.Random, m: int, n: int) -> ExactMatrix:
    """
    Draws a matrix of positive rationals with small numerators and denominators.

    :param rng: The random generator.
    :param m: The number of rows.
    :param n: The number of columns.

    :return: The matrix.
    """

    return ExactMatrix.from_rows(
        [[Fraction(rng.randint(1, 30), rng.randint(1, 7)) for _ in range(n)] for _ in range(m)]
    )
