import math

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ballm", deadline=None, max_examples=40)
settings.load_profile("ballm")

ARCSEC3 = math.acos(1 / 3)


@pytest.fixture
def unit_dirs():
    def make(n, seed=0):
        u = np.random.default_rng(seed).standard_normal((n, 3))
        return u / np.linalg.norm(u, axis=1, keepdims=True)

    return make
