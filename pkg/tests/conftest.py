import numpy as np
import pytest

from twrc import ChannelParams, Downlink


def random_params(rng, downlink=None, p_range=(0.0, 40.0), n0_range=(0.5, 4.0)):
    """Random channel; ``downlink=None`` draws it half the time."""
    p1, p2 = rng.uniform(*p_range, size=2)
    n0 = rng.uniform(*n0_range)
    if downlink is None:
        downlink = rng.random() < 0.5
    dl = None
    if downlink:
        dl = Downlink(rng.uniform(0.0, 60.0), rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0))
    return ChannelParams(float(p1), float(p2), float(n0), dl)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
