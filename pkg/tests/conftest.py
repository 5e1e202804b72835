import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gaborcs.gabor import make_window
from gaborcs.zauner import star_window


@pytest.fixture(scope="session")
def star33():
    return star_window(33)


@pytest.fixture(scope="session")
def star3():
    return star_window(3)


def window_of(kind, L):
    if kind == "star":
        return star_window(L).vector
    return make_window(kind, L)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
