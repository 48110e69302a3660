import random
from pathlib import Path

import pytest

from dualdefect.config import PointConfig
from dualdefect.cayley import cayley_sum
from dualdefect.exact_linalg import identity

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def unit_vector(i, n):
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def random_unimodular(rng: random.Random, n: int):
    """Product of random elementary row operations on the identity."""
    u = identity(n)
    for _ in range(4 * n + 2):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            c = rng.choice([-2, -1, 1, 2])
            for k in range(n):
                u[i][k] += c * u[j][k]
    return u


def segre_product(a: int, b: int) -> PointConfig:
    """Vertex set of the Segre embedding of P^a x P^b."""
    pts = []
    for i in range(a + 1):
        for j in range(b + 1):
            left = [0] * a
            right = [0] * b
            if i:
                left[i - 1] = 1
            if j:
                right[j - 1] = 1
            pts.append(tuple(left + right))
    return PointConfig.make(pts)


@pytest.fixture
def segre_square():
    return PointConfig.make([(0, 0), (1, 0), (0, 1), (1, 1)])


@pytest.fixture
def ex5_7():
    f0 = PointConfig.make([(0, 0), (1, 0), (2, 0)])
    f1 = PointConfig.make([(0, 0), (0, 1), (0, 2)])
    f2 = PointConfig.make([(0, 0), (1, 0), (0, 1), (1, 1)])
    return cayley_sum([f0, f1, f2, f2])


@pytest.fixture
def ex5_7_fibers():
    f0 = PointConfig.make([(0, 0), (1, 0), (2, 0)])
    f1 = PointConfig.make([(0, 0), (0, 1), (0, 2)])
    f2 = PointConfig.make([(0, 0), (1, 0), (0, 1), (1, 1)])
    return (f0, f1, f2, f2)


EX58_U = (-1, 2, 0, 0, -2, 1)
EX58_V = (0, 0, -1, 2, -2, 1)


@pytest.fixture
def ex5_8():
    pts = [(0,) * 6] + [unit_vector(i, 6) for i in range(1, 7)]
    pts += [EX58_U, EX58_V]
    return PointConfig.make(pts)


def unit_simplex(n: int) -> PointConfig:
    pts = [(0,) * n] + [unit_vector(i, n) for i in range(1, n + 1)]
    return PointConfig.make(pts)
