import math

import numpy as np
import pytest

from szego_lab import ConformalPair, WeightSpec, build_outer, make_boundary_grid

QUAD = ConformalPair.quadratic(0.2 + 0.1j)
CURVES = [ConformalPair.disk(), QUAD]
WEIGHTS = [WeightSpec("const", 1.0), WeightSpec("expcos"), WeightSpec("szego_a", a=0.5)]


def bessel_i0(x: float, terms: int = 40) -> float:
    """Power series sum_k (x^2/4)^k / (k!)^2."""
    return sum((x * x / 4.0) ** k / math.factorial(k) ** 2 for k in range(terms))


@pytest.fixture(scope="session")
def disk():
    return ConformalPair.disk()


@pytest.fixture(scope="session")
def quad():
    return QUAD


@pytest.fixture(scope="session")
def grid_factory():
    cache = {}

    def make(pair, weight, M=1024):
        key = (pair, weight, M)
        if key not in cache:
            cache[key] = make_boundary_grid(pair, weight, M)
        return cache[key]

    return make


@pytest.fixture(scope="session")
def outer_factory(grid_factory):
    cache = {}

    def make(pair, weight, p, M=1024, K=256):
        key = (pair, weight, p, M, K)
        if key not in cache:
            grid = grid_factory(pair, weight, M)
            cache[key] = (grid, build_outer(grid, p, K))
        return cache[key]

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
