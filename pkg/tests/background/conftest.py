"""Shared fixtures for background tests."""

from __future__ import annotations

import pytest

from crflab.geometry import GridChart


@pytest.fixture
def surface16() -> GridChart:
    return GridChart(1, 16)
