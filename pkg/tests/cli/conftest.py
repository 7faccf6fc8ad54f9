"""Shared fixtures for CLI tests."""

from __future__ import annotations

from pathlib import Path

import pytest
from typer.testing import CliRunner


@pytest.fixture
def cli_runner() -> CliRunner:
    """Typer CliRunner instance for invoking CLI commands in tests."""
    return CliRunner()


@pytest.fixture
def workdir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Run commands from an empty directory so no project file is picked up."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("CRF_LOG_FORMAT", "text")
    return tmp_path
