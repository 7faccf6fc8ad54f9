"""Shared fixtures for geometry tests."""

from __future__ import annotations

import pytest

from crflab.geometry import GridChart


@pytest.fixture
def surface() -> GridChart:
    return GridChart(1, 16)


@pytest.fixture
def surface32() -> GridChart:
    return GridChart(1, 32)


@pytest.fixture
def fourfold() -> GridChart:
    return GridChart(2, 16)
