import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ccbox.box import random_box

settings.register_profile(
    "ccbox", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ccbox")


@pytest.fixture
def rng():
    return np.random.default_rng(7)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def box_from_seed(seed, nonfree=None):
    return random_box(np.random.default_rng(seed), nonfree=nonfree)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
