import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_feasible(rng, dim):
    """A random strictly-positive simplex vector (raw ndarray)."""
    g = rng.standard_exponential(dim)
    return g / g.sum()
