"""
Shared fixtures and configuration for all tests.
"""
import math
import sys
import tempfile
import shutil
from pathlib import Path

import numpy as np
import pytest

# Ensure src is in path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core.config import AppConfig
from core.dimreg import ScatteringConfig
from core.potential import lj12


def golden_delta(eta=1.0, alpha=1.0, beta=1.0, k=1.0):
    """2 pi alpha eta k^10/155925 + 2 pi beta eta k^4/15."""
    return 2 * math.pi * alpha * eta * k ** 10 / 155925 + 2 * math.pi * beta * eta * k ** 4 / 15


@pytest.fixture
def golden():
    """The closed-form s-wave phase shift of lj12(eta, alpha, beta)."""
    return golden_delta


@pytest.fixture
def temp_dir():
    """Create a temporary directory for testing."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    # Cleanup
    if temp_path.exists():
        shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def settings():
    """Default application settings."""
    return AppConfig()


@pytest.fixture
def lj_unit():
    """Lennard-Jones 12-6 with eta = alpha = beta = 1."""
    return lj12(1.0, 1.0, 1.0)


@pytest.fixture
def swave():
    """s-wave at k = 1 in three dimensions."""
    return ScatteringConfig(k=1.0, l=0, n=3.0)


@pytest.fixture
def rng():
    """Seeded generator so randomized suites are reproducible."""
    return np.random.default_rng(20240607)


# Markers for test categorization
def pytest_configure(config):
    """Configure custom markers."""
    config.addinivalue_line("markers", "unit: Unit tests")
    config.addinivalue_line("markers", "integration: Integration tests")
    config.addinivalue_line("markers", "property: Randomized property tests")
    config.addinivalue_line("markers", "edge_case: Edge case tests")
    config.addinivalue_line("markers", "slow: Slow tests")
