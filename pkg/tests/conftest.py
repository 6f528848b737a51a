import numpy as np
import pytest
from hypothesis import settings

from langdiv import builtin

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def beam_splitter():
    return builtin.beam_splitter()


@pytest.fixture(params=[0.0, 0.5, 1.3], ids=lambda k: f"k={k}")
def kicked_top(request):
    return builtin.kicked_top(request.param)


@pytest.fixture
def p10000():
    return builtin.period5("10000")


@pytest.fixture
def hadamard():
    return builtin.HADAMARD.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
