import numpy as np
import pytest
from hypothesis import settings

from bibdopt.instances import DesignSpec

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def spec_7():
    return DesignSpec(7, 7, 3, 3, 1)


@pytest.fixture
def spec_8():
    return DesignSpec(8, 14, 7, 4, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
