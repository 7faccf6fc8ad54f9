"""Tests for the flow identity residuals."""

from __future__ import annotations

import math

import pytest

from crflab.background import BackgroundData
from crflab.flow import (
    Trajectory,
    exact_flow_residual,
    subsample,
    verify_flow_identity,
)


def _centered_spacing_error(h: float) -> float:
    # centered difference of e^{-t} at t = 1
    return math.exp(-1.0) * (math.sinh(h) / h - 1.0)


class TestHomogeneousIdentity:
    def test_exact_residual_vanishes(
        self,
        homogeneous_bg: BackgroundData,
        homogeneous_trajectory: Trajectory,
    ) -> None:
        report = verify_flow_identity(homogeneous_trajectory, homogeneous_bg)
        assert report.spacing == pytest.approx(0.25)
        assert report.max_exact < 1e-10
        assert len(report.times) == len(homogeneous_trajectory) - 2

    def test_centered_residual_is_time_discretization(
        self,
        homogeneous_bg: BackgroundData,
        homogeneous_trajectory: Trajectory,
    ) -> None:
        report = verify_flow_identity(homogeneous_trajectory, homogeneous_bg)
        assert report.max_centered < 0.02
        at_one = report.centered[report.times.index(1.0)]
        assert at_one == pytest.approx(_centered_spacing_error(0.25), rel=1e-3)

    def test_halving_spacing_quarters_residual(
        self,
        homogeneous_bg: BackgroundData,
        homogeneous_trajectory: Trajectory,
    ) -> None:
        fine = verify_flow_identity(homogeneous_trajectory, homogeneous_bg)
        coarse = verify_flow_identity(
            subsample(homogeneous_trajectory, 2), homogeneous_bg
        )
        ratio = (
            coarse.centered[coarse.times.index(1.0)]
            / fine.centered[fine.times.index(1.0)]
        )
        assert 3.5 < ratio < 4.5

    def test_single_snapshot_treated_as_stationary(
        self,
        homogeneous_bg: BackgroundData,
        homogeneous_trajectory: Trajectory,
    ) -> None:
        lone = homogeneous_trajectory.with_snapshots(
            [homogeneous_trajectory.snapshots[0]]
        )
        report = verify_flow_identity(lone, homogeneous_bg)
        assert report.spacing is None
        # ||Ric(omega0) + omega0|| = |-1 + 2|
        assert report.centered == pytest.approx([1.0])
        assert report.to_dict()["times"] == [0.0]


class TestSmoothIdentity:
    def test_exact_residual_at_spectral_accuracy(
        self,
        smooth_bg: BackgroundData,
        smooth_trajectory: Trajectory,
    ) -> None:
        worst = max(
            exact_flow_residual(smooth_bg, snap) for snap in smooth_trajectory.snapshots
        )
        assert worst < 1e-8
