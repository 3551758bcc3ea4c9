import math
from random import Random

import pytest

from adchain import LinkState


def random_family_state(rng: Random) -> LinkState:
    """Direct sample from the block-diagonal family (not rule-generated).

    Covers corners the rules never reach, e.g. negative coherences.
    """
    h1 = rng.uniform(0.0, 1.0)
    h2 = rng.uniform(0.0, 1.0 - h1)
    h3 = rng.uniform(-1.0, 1.0) * math.sqrt(h1 * h2)
    h5 = 0.5 * (1.0 - h1 - h2)
    h4 = rng.uniform(-h5, h5)
    return LinkState(h1, h2, h3, h4)


@pytest.fixture
def rng() -> Random:
    return Random(0xADC)
