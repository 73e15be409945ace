import numpy as np
import pytest

from jordankepler.triples import TripleSpace


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def space23():
    """C^{2x3} with Kepler rank 1."""
    return TripleSpace(2, 3, 1)


@pytest.fixture
def space23_full():
    """C^{2x3} with maximal Kepler rank 2."""
    return TripleSpace(2, 3, 2)


@pytest.fixture
def space14():
    """The rank-one space C^{1x4}."""
    return TripleSpace(1, 4, 1)


@pytest.fixture
def space34():
    """C^{3x4} with Kepler rank 2."""
    return TripleSpace(3, 4, 2)
