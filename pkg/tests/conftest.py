import numpy as np
import pytest

from core.filter import FilterParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def make_poles(rng, S, r_min=0.1, r_max=0.9):
    phases = -np.pi + 2 * np.pi * (np.arange(S) + rng.uniform(0.1, 0.9, S)) / S
    return rng.uniform(r_min, r_max, S) * np.exp(1j * phases)


def make_params(rng, S, r_min=0.1, r_max=0.9):
    b = 0.5 * (rng.normal(size=S) + 1j * rng.normal(size=S))
    return FilterParams(make_poles(rng, S, r_min, r_max), b)


@pytest.fixture
def single_pole():
    """S=1, a=0.5, b=0.375: white-noise shift-1 loss 0.8125."""
    return FilterParams([0.5], [0.375])
