"""Configuration for pytest."""

import sys
from pathlib import Path

import pytest

# Add the project root to the path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from mahler_sums.domain.numerics import PrecisionContext  # noqa: E402


@pytest.fixture
def ctx() -> PrecisionContext:
    """Default working precision (P = 256, g = 32)."""
    return PrecisionContext(256, 32)


@pytest.fixture
def low_ctx() -> PrecisionContext:
    """Cheap precision for property tests."""
    return PrecisionContext(128, 16)


@pytest.fixture
def high_ctx() -> PrecisionContext:
    """Precision used by relation searches."""
    return PrecisionContext(512, 32)
