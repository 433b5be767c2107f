import numpy as np
import pytest

from qslora import raised_cosine, rectangular


@pytest.fixture
def rect():
    return rectangular()


@pytest.fixture
def rc():
    return raised_cosine()


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
