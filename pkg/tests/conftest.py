"""Shared fixtures: the worked 9-agent profile and the test data directory."""

from pathlib import Path

import pytest

from impartial import WeightMatrix

DATA_DIR = Path(__file__).parent / "data"

EXAMPLE_ROWS = (
    (0, 2, 0, 0, 0, 3, 0, 0, 1),
    (0, 0, 1, 0, 1, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 3, 0),
    (0, 0, 2, 0, 0, 0, 0, 0, 0),
    (2, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 3, 0, 1, 0, 0),
    (0, 3, 2, 0, 0, 0, 0, 2, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 2, 0, 1, 0, 2, 0),
)


@pytest.fixture
def example_matrix() -> WeightMatrix:
    """The 9-agent profile used throughout the documentation and goldens."""
    return WeightMatrix(EXAMPLE_ROWS)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
