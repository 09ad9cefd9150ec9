"""Shared fixtures: cached kernel sets and a seeded generator.

Assembly dominates test runtime, so kernel sets are built once per
session and shared read-only across files.
"""

import numpy as np
import pytest

from expcap.grids import build_grid
from expcap.kernels import assemble

_CACHE = {}


def cached_kernels(shape: str, n: int):
    key = (shape, n)
    if key not in _CACHE:
        _CACHE[key] = assemble(build_grid(shape, n))
    return _CACHE[key]


@pytest.fixture(scope="session")
def ks16():
    return cached_kernels("square", 16)


@pytest.fixture(scope="session")
def ks32():
    return cached_kernels("square", 32)


@pytest.fixture(scope="session")
def ks_interval():
    return cached_kernels("interval", 33)


@pytest.fixture(scope="session")
def ks_disk():
    return cached_kernels("disk", 24)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260815)
