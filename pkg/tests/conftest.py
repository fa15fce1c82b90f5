import random

import numpy as np
import pytest


@pytest.fixture
def rng():
    return random.Random(20260809)


@pytest.fixture
def nprng():
    return np.random.default_rng(20260809)
