from __future__ import annotations

import numpy as np
import pytest

from elemrange.elemop import random_instance


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def random_operator(rng):
    def make(n=2, k=2, label=None):
        return random_instance(n, k, rng, label=label)

    return make


def random_matrix(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
