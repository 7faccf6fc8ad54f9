"""Tests for the Kähler-Einstein Newton solver and its checks."""

from __future__ import annotations

import math

import numpy as np
import pytest

from crflab.background import (
    BackgroundData,
    scenario_fixed_point,
    scenario_homogeneous,
    scenario_smooth,
)
from crflab.einstein import (
    KESolution,
    compare_uniqueness,
    from_potential,
    solve_ke,
    verify_einstein,
    verify_volume_pinch,
)
from crflab.errors import ConfigError, SolverError
from crflab.flow import FlowConfig, Scheme, limit_potential, run
from crflab.geometry import ScalarField


@pytest.fixture(scope="module")
def shifted_bg() -> BackgroundData:
    """Homogeneous data whose Einstein potential is the constant log 2."""
    return scenario_homogeneous(1, 2.0, 3.0, 1.5)


@pytest.fixture(scope="module")
def smooth_ke() -> tuple[BackgroundData, KESolution]:
    bg = scenario_smooth(16, 1)
    return bg, solve_ke(bg)


class TestSolveKE:
    def test_homogeneous_constant(self, shifted_bg: BackgroundData) -> None:
        sol = solve_ke(shifted_bg)
        np.testing.assert_allclose(sol.theta.values, math.log(2.0), atol=1e-8)
        assert sol.residual <= 1e-8
        assert sol.newton_iters >= 1
        assert len(sol.residual_history) == sol.newton_iters + 1

    def test_fixed_point_needs_no_iteration(self) -> None:
        sol = solve_ke(scenario_fixed_point(1))
        assert sol.newton_iters == 0
        assert sol.theta.sup_abs() == 0.0

    def test_smooth_converges(
        self, smooth_ke: tuple[BackgroundData, KESolution]
    ) -> None:
        bg, sol = smooth_ke
        assert sol.residual <= 1e-8
        history = sol.residual_history
        assert all(b < a for a, b in zip(history, history[1:], strict=False))
        assert verify_einstein(sol, bg) < 1e-4

    def test_iteration_budget(self) -> None:
        with pytest.raises(SolverError) as info:
            solve_ke(scenario_smooth(16, 1), max_iter=1)
        assert len(info.value.residual_history) == 2

    def test_inadmissible_initial_guess(self) -> None:
        bg = scenario_smooth(16, 1)
        x1 = bg.chart.coordinates()[0]
        guess = ScalarField(bg.chart, np.cos(2.0 * np.pi * x1))
        with pytest.raises(SolverError, match="initial guess"):
            solve_ke(bg, theta0=guess)

    def test_warm_start_at_solution(
        self, smooth_ke: tuple[BackgroundData, KESolution]
    ) -> None:
        bg, sol = smooth_ke
        again = solve_ke(bg, theta0=sol.theta)
        assert again.newton_iters == 0


class TestChecks:
    def test_homogeneous_einstein_residual(self, shifted_bg: BackgroundData) -> None:
        sol = solve_ke(shifted_bg)
        assert verify_einstein(sol, shifted_bg) < 1e-10

    def test_volume_pinch(self, smooth_ke: tuple[BackgroundData, KESolution]) -> None:
        bg, sol = smooth_ke
        report = verify_volume_pinch(sol, bg)
        assert report.ok
        assert report.violations == []
        assert len(report.entries) == 4
        # psi = 0, so every epsilon sees the same ratio
        assert report.entries[0].sup_ratio == pytest.approx(report.sup_volume_ratio)

    def test_pinch_rejects_epsilon(
        self, smooth_ke: tuple[BackgroundData, KESolution]
    ) -> None:
        bg, sol = smooth_ke
        with pytest.raises(ConfigError):
            verify_volume_pinch(sol, bg, [0.0])

    def test_from_potential_does_not_iterate(self, shifted_bg: BackgroundData) -> None:
        theta = ScalarField.constant(shifted_bg.chart, 0.5)
        sol = from_potential(shifted_bg, theta)
        assert sol.newton_iters == 0
        assert sol.residual == pytest.approx(abs(math.log(2.0) - 0.5))


class TestUniqueness:
    def test_self_comparison(
        self, smooth_ke: tuple[BackgroundData, KESolution]
    ) -> None:
        bg, sol = smooth_ke
        report = compare_uniqueness(sol, sol, bg)
        assert report.sup_difference == 0.0
        assert len(report.entries) == 4
        assert report.violations == []

    def test_fitted_constants_are_used(
        self, smooth_ke: tuple[BackgroundData, KESolution]
    ) -> None:
        bg, sol = smooth_ke
        report = compare_uniqueness(sol, sol, bg, c_eps={0.1: 7.0})
        used = {(e.delta, e.epsilon): e.c_eps for e in report.entries}
        assert used[(0.1, 0.1)] == 7.0

    def test_delta_out_of_range(
        self, smooth_ke: tuple[BackgroundData, KESolution]
    ) -> None:
        bg, sol = smooth_ke
        with pytest.raises(ConfigError):
            compare_uniqueness(sol, sol, bg, deltas=[1.0])

    def test_flow_limit_matches_newton(self, shifted_bg: BackgroundData) -> None:
        cfg = FlowConfig(scheme=Scheme.imex, t_max=30.0, convergence_tol=1e-8)
        trajectory = run(shifted_bg, cfg)
        assert trajectory.converged
        flow_sol = from_potential(shifted_bg, limit_potential(trajectory).phi)
        report = compare_uniqueness(flow_sol, solve_ke(shifted_bg), shifted_bg)
        assert report.sup_difference < 1e-4
        assert report.violations == []
