import math

import numpy as np
import pytest

from qrac_entropy.config import CertifierConfig
from qrac_entropy.protocol3 import build_protocol3
from qrac_entropy.strategy import Strategy
from qrac_entropy.utils import random_unit_vectors


SQRT2 = math.sqrt(2)
SQRT3 = math.sqrt(3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20120306)


@pytest.fixture
def qrac3() -> Strategy:
    return build_protocol3()


@pytest.fixture
def qrac2() -> Strategy:
    """The optimal 2→1 code: states at (±1, ±1, 0)/√2, measurements σ_x and σ_y."""
    states = [
        (1 - 2 * ((a >> 1) & 1), 1 - 2 * (a & 1), 0.0) for a in range(4)
    ]
    return Strategy.from_vectors(
        np.array(states) / SQRT2, np.array([(1.0, 0.0, 0.0), (0.0, 1.0, 0.0)])
    )


@pytest.fixture
def fast_certifier() -> CertifierConfig:
    return CertifierConfig(starts=10, max_iters_per_weight=100)


def random_strategy(rng: np.random.Generator, n: int) -> Strategy:
    return Strategy.from_vectors(
        random_unit_vectors(rng, 2**n), random_unit_vectors(rng, n)
    )
