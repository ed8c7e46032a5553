import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cosym3 import decompose, euclidean_space, flat_torus, m7f


@pytest.fixture(scope="session")
def torus7():
    return flat_torus(1)


@pytest.fixture(scope="session")
def m7f_model():
    return m7f()


@pytest.fixture(scope="session")
def standard7():
    return euclidean_space(1)


@pytest.fixture(scope="session")
def torus7_table(torus7):
    return decompose(*torus7)


@pytest.fixture(scope="session")
def m7f_table(m7f_model):
    return decompose(*m7f_model)
