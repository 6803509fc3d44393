import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from traceineq import samplers

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def gen(seed):
    return samplers.trial_rng(seed, 0)
