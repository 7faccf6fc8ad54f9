"""Tests for the pipelines behind the CLI commands."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from crflab.config.models import RunConfig, ScenarioName
from crflab.einstein.verify import COMPARISON_EPS
from crflab.errors import ConfigError
from crflab.estimates import check_lower_bounds
from crflab.flow import Trajectory
from crflab.io import load_trajectory, read_scalar
from crflab.pipeline import (
    build_background,
    diagnostics_view,
    execute_ke,
    execute_run,
    flow_limit_solution,
)


class TestBuildBackground:
    @pytest.mark.parametrize(
        "scenario",
        [
            ScenarioName.smooth,
            ScenarioName.degenerate,
            ScenarioName.homogeneous,
            ScenarioName.fixed_point,
        ],
    )
    def test_builtin_scenarios(self, scenario: ScenarioName) -> None:
        bg = build_background(RunConfig(scenario=scenario, resolution=16))
        assert bg.scenario == scenario.value
        assert bg.chart.resolution == 16

    def test_torsion_needs_two_dimensions(self) -> None:
        with pytest.raises(ValidationError, match="n = 2"):
            RunConfig(scenario=ScenarioName.torsion, n=1)

    def test_from_file_missing_directory(self, tmp_path: Path) -> None:
        cfg = RunConfig(
            scenario=ScenarioName.from_file, background_path=str(tmp_path / "bg")
        )
        with pytest.raises(ConfigError, match="not found"):
            build_background(cfg)


class TestDiagnosticsView:
    def test_stride_keeps_final(self, homogeneous_trajectory: Trajectory) -> None:
        view = diagnostics_view(homogeneous_trajectory, 5)
        times = [s.t for s in view.snapshots]
        np.testing.assert_allclose(times, [0.0, 1.25, 2.5, 3.75, 5.0, 6.0])

    def test_stride_landing_on_final(
        self, homogeneous_trajectory: Trajectory
    ) -> None:
        view = diagnostics_view(homogeneous_trajectory, 4)
        assert len(view) == 7
        assert view.final is homogeneous_trajectory.final

    def test_stride_one_is_identity(self, homogeneous_trajectory: Trajectory) -> None:
        view = diagnostics_view(homogeneous_trajectory, 1)
        assert len(view) == len(homogeneous_trajectory)


def test_flow_limit_as_einstein_candidate(
    homogeneous_trajectory: Trajectory,
) -> None:
    # The Einstein potential is 0 here, so the residual is the leftover phi.
    candidate = flow_limit_solution(homogeneous_trajectory)
    assert candidate.newton_iters == 0
    assert candidate.residual == pytest.approx(math.log1p(math.exp(-6.0)), rel=1e-4)


def test_execute_run_writes_dumps(tmp_path: Path) -> None:
    cfg = RunConfig(
        scenario=ScenarioName.homogeneous,
        resolution=16,
        t_max=2.0,
        dt_max=0.01,
        dump_times=[1.0],
        output_dir=str(tmp_path),
    )
    outcome = execute_run(cfg)
    assert outcome.summary["flow"]["snapshots"] == 9
    phi = read_scalar(tmp_path / "phi_t1.crf", outcome.trajectory.background.chart)
    np.testing.assert_allclose(phi.values, math.log1p(math.exp(-1.0)), rtol=1e-6)


def test_execute_ke_fixed_point(tmp_path: Path) -> None:
    cfg = RunConfig(
        scenario=ScenarioName.fixed_point, resolution=16, output_dir=str(tmp_path)
    )
    outcome = execute_ke(cfg)
    assert outcome.solution.newton_iters == 0
    assert outcome.violations == []
    assert (tmp_path / "ke.json").is_file()
    assert (tmp_path / "theta.crf").is_file()


def test_execute_ke_compares_with_stored_lower_bounds(tmp_path: Path) -> None:
    flow_dir = tmp_path / "flow"
    cfg = RunConfig(
        scenario=ScenarioName.homogeneous,
        resolution=16,
        t_max=2.0,
        dt_max=0.01,
        output_dir=str(flow_dir),
    )
    execute_run(cfg)
    outcome = execute_ke(
        cfg.model_copy(update={"output_dir": str(tmp_path / "ke")}),
        compare=flow_dir / "phi_final.crf",
    )
    stored = flow_dir / "trajectory"
    fit = check_lower_bounds(load_trajectory(stored), COMPARISON_EPS)
    section = outcome.summary["uniqueness"]
    assert section["c_eps_source"] == str(stored)
    assert len(section["entries"]) == 2 * len(COMPARISON_EPS)
    for entry in section["entries"]:
        assert entry["C_eps"] == fit.c_eps(entry["epsilon"])
