"""Shared pytest fixtures for the crflab test suite."""

from __future__ import annotations

import numpy as np
import pytest

from crflab.background import (
    BackgroundData,
    scenario_degenerate,
    scenario_homogeneous,
    scenario_smooth,
    scenario_torsion,
)
from crflab.config import Settings
from crflab.estimates import CheckReport, run_checks
from crflab.flow import FlowConfig, Scheme, Trajectory, run


@pytest.fixture
def test_settings() -> Settings:
    """Settings instance with test defaults, ignoring any .env file on disk."""
    return Settings(
        _env_file=None,  # type: ignore[call-arg]
        log_level="DEBUG",
        log_format="text",
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


# -- backgrounds and runs shared across modules (built once per session) -----


@pytest.fixture(scope="session")
def homogeneous_bg() -> BackgroundData:
    """a0 = 2, a_inf = 1, Omega = 1 on a 16-point surface grid."""
    return scenario_homogeneous(1, 2.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def homogeneous_trajectory(homogeneous_bg: BackgroundData) -> Trajectory:
    cfg = FlowConfig(t_max=6.0, dt_max=0.01, snapshot_every=0.25)
    return run(homogeneous_bg, cfg)


@pytest.fixture(scope="session")
def smooth_bg() -> BackgroundData:
    return scenario_smooth(32, 1)


@pytest.fixture(scope="session")
def smooth_trajectory(smooth_bg: BackgroundData) -> Trajectory:
    cfg = FlowConfig(scheme=Scheme.imex, t_max=3.0, snapshot_every=0.25)
    return run(smooth_bg, cfg)


@pytest.fixture(scope="session")
def degenerate_bg() -> BackgroundData:
    return scenario_degenerate(64, 1)


@pytest.fixture(scope="session")
def degenerate_trajectory(degenerate_bg: BackgroundData) -> Trajectory:
    cfg = FlowConfig(scheme=Scheme.imex, t_max=2.0, snapshot_every=0.25)
    return run(degenerate_bg, cfg)


@pytest.fixture(scope="session")
def torsion_bg() -> BackgroundData:
    return scenario_torsion(16)


@pytest.fixture(scope="session")
def torsion_trajectory(torsion_bg: BackgroundData) -> Trajectory:
    """RK4 to t = 0.75 with snapshots every 0.125."""
    cfg = FlowConfig(t_max=0.75, dt_max=0.01, snapshot_every=0.125)
    return run(torsion_bg, cfg)


@pytest.fixture(scope="session")
def homogeneous_report(homogeneous_trajectory: Trajectory) -> CheckReport:
    return run_checks(homogeneous_trajectory)


@pytest.fixture(scope="session")
def degenerate_report(degenerate_trajectory: Trajectory) -> CheckReport:
    return run_checks(degenerate_trajectory)
