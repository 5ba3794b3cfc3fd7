import random

import pytest
from hypothesis import settings

from tspchain.core import CostMatrix, Tour
from tspchain.fixtures import C_STAR, C_X

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def cstar():
    return CostMatrix.from_rows(C_STAR)


@pytest.fixture
def cx():
    return CostMatrix.from_rows(C_X)


@pytest.fixture
def x4():
    return Tour.from_cycle([1, 2, 3, 4])


@pytest.fixture
def y4():
    return Tour.from_cycle([1, 4, 2, 3])


def random_corpus(seed, sizes, per_size, high=99):
    """Seeded random integer matrices with an INF diagonal."""
    rng = random.Random(seed)
    out = []
    for n in sizes:
        for _ in range(per_size):
            out.append(CostMatrix.from_rows(
                [[None if i == j else rng.randint(0, high) for j in range(n)] for i in range(n)]))
    return out
