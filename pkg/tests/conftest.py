import dataclasses

import numpy as np
import pytest

from semalloc.config import default_config


@pytest.fixture(scope="session")
def base_config():
    return default_config()


@pytest.fixture
def quick_config(base_config):
    """Short run for harness-level tests."""
    return dataclasses.replace(base_config, slots=60)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
