"""Shared fixtures for config tests."""

from __future__ import annotations

from pathlib import Path

import pytest
import tomli_w


@pytest.fixture
def project_dir(tmp_path: Path) -> Path:
    """Temporary directory simulating a project root."""
    proj = tmp_path / "project"
    proj.mkdir()
    return proj


@pytest.fixture
def write_toml():
    """Write a flat TOML mapping to a path and return the path."""

    def _write(path: Path, values: dict[str, object]) -> Path:
        with open(path, "wb") as f:
            tomli_w.dump(values, f)
        return path

    return _write
