"""Scenario -> flow -> estimates -> einstein pipelines behind the CLI commands."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

from crflab.background import (
    BackgroundData,
    scenario_degenerate,
    scenario_fixed_point,
    scenario_homogeneous,
    scenario_smooth,
    scenario_torsion,
)
from crflab.config.models import RunConfig, ScenarioName
from crflab.einstein import (
    KESolution,
    UniquenessReport,
    VolumePinchReport,
    compare_uniqueness,
    from_potential,
    solve_ke,
    verify_einstein,
    verify_volume_pinch,
)
from crflab.einstein.verify import COMPARISON_EPS
from crflab.errors import ConfigError
from crflab.estimates import CheckReport, check_lower_bounds, run_checks
from crflab.flow import Trajectory, limit_potential, run, snapshot_metric
from crflab.geometry.operators import trace_array
from crflab.io import (
    build_summary,
    load_background,
    load_trajectory,
    read_scalar,
    save_trajectory,
    write_diagnostics_csv,
    write_field,
    write_pgm,
    write_report,
    write_summary,
)
from crflab.logging import get_logger

_log = get_logger("crflab.pipeline")

TRAJECTORY_DIR = "trajectory"


def build_background(cfg: RunConfig) -> BackgroundData:
    """Construct the background named by ``cfg.scenario``."""
    match cfg.scenario:
        case ScenarioName.smooth:
            return scenario_smooth(
                cfg.resolution, cfg.n, amplitude=cfg.amplitude, mode=cfg.mode
            )
        case ScenarioName.degenerate:
            return scenario_degenerate(
                cfg.resolution, cfg.n, kappa=cfg.kappa, delta=cfg.delta, mode=cfg.mode
            )
        case ScenarioName.homogeneous:
            return scenario_homogeneous(
                cfg.n,
                cfg.a0,
                cfg.a_inf,
                cfg.omega_const,
                resolution=cfg.resolution,
                mode=cfg.mode,
            )
        case ScenarioName.fixed_point:
            return scenario_fixed_point(
                cfg.n, cfg.a0, resolution=cfg.resolution, mode=cfg.mode
            )
        case ScenarioName.torsion:
            return scenario_torsion(
                cfg.resolution, amplitude=cfg.amplitude, mode=cfg.mode
            )
        case ScenarioName.from_file:
            if cfg.background_path is None:
                raise ConfigError("scenario 'from-file' needs background_path")
            return load_background(Path(cfg.background_path))


def diagnostics_view(trajectory: Trajectory, stride: int) -> Trajectory:
    """Every *stride*-th snapshot, always ending on the final one."""
    snaps = trajectory.snapshots[::stride]
    if snaps[-1] is not trajectory.final:
        snaps = [*snaps, trajectory.final]
    return trajectory.with_snapshots(snaps)


def flow_summary(trajectory: Trajectory) -> dict[str, Any]:
    return {
        "converged": trajectory.converged,
        "t_final": trajectory.final.t,
        "sup_phidot_final": trajectory.final_sup_phidot(),
        "snapshots": len(trajectory),
        "steps_taken": trajectory.steps_taken,
        "rejected_steps": trajectory.rejected_steps,
        "config": trajectory.config.model_dump(mode="json"),
    }


@dataclass
class RunOutcome:
    trajectory: Trajectory
    report: CheckReport
    summary: dict[str, Any]
    output_dir: Path


def write_check_outputs(
    report: CheckReport, summary: dict[str, Any], output_dir: Path
) -> None:
    write_diagnostics_csv(report.records, output_dir / "diagnostics.csv")
    write_summary(summary, output_dir / "summary.json")
    write_report(summary, output_dir / "report.txt")


def write_heatmaps(trajectory: Trajectory, output_dir: Path) -> None:
    bg = trajectory.background
    final = trajectory.final
    omega = snapshot_metric(bg, final)
    write_pgm(final.phi.values, output_dir / "phi.pgm")
    write_pgm(trace_array(bg.omega0.inverse, omega.coeff), output_dir / "trace.pgm")
    write_pgm(bg.psi.values, output_dir / "psi.pgm")


def execute_run(cfg: RunConfig) -> RunOutcome:
    """Run the flow, check every lemma and write the result files."""
    output_dir = Path(cfg.output_dir)
    bg = build_background(cfg)
    trajectory = run(bg, cfg.flow_config())
    save_trajectory(trajectory, output_dir / TRAJECTORY_DIR)

    view = diagnostics_view(trajectory, cfg.diagnostics_stride)
    report = run_checks(view, cfg.eps_list, cfg.t1)
    summary = build_summary(
        {
            "background": bg.describe(),
            "flow": flow_summary(trajectory),
            "checks": report.to_dict(),
        }
    )
    write_check_outputs(report, summary, output_dir)
    write_heatmaps(trajectory, output_dir)
    write_field(output_dir / "phi_final.crf", trajectory.final.phi.values)
    for t in cfg.dump_times:
        for snap in trajectory.snapshots:
            if abs(snap.t - t) < 1e-9:
                write_field(output_dir / f"phi_t{t:g}.crf", snap.phi.values)
    _log.info("pipeline.run_written: dir=%s", output_dir)
    return RunOutcome(trajectory, report, summary, output_dir)


def execute_verify(trajectory_dir: Path, cfg: RunConfig) -> CheckReport:
    """Re-run the lemma suite on a stored trajectory and write ``verify.json``."""
    trajectory = load_trajectory(trajectory_dir)
    view = diagnostics_view(trajectory, cfg.diagnostics_stride)
    report = run_checks(view, cfg.eps_list, cfg.t1)
    summary = build_summary(
        {
            "background": trajectory.background.describe(),
            "flow": flow_summary(trajectory),
            "checks": report.to_dict(),
        }
    )
    write_summary(summary, Path(cfg.output_dir) / "verify.json")
    return report


@dataclass
class KEOutcome:
    solution: KESolution
    einstein_residual: float
    pinch: VolumePinchReport
    uniqueness: UniquenessReport | None
    summary: dict[str, Any]

    @property
    def violations(self) -> list[str]:
        found = list(self.pinch.violations)
        if self.uniqueness is not None:
            found += self.uniqueness.violations
        return found


def comparison_constants(
    bg: BackgroundData, cfg: RunConfig, compare: Path
) -> tuple[dict[float, float], str]:
    """``C_eps`` of the lower-bound fit for the flow that produced *compare*.

    The trajectory stored next to the dump is used when there is one;
    otherwise the flow is rerun on *bg* with the configured stepping.
    """
    stored = compare.parent / TRAJECTORY_DIR
    if stored.is_dir():
        trajectory = load_trajectory(stored)
        source = str(stored)
    else:
        _log.info("pipeline.lower_bounds_rerun: dump=%s", compare)
        trajectory = run(bg, cfg.flow_config())
        source = "rerun"
    fit = check_lower_bounds(trajectory, COMPARISON_EPS)
    return {eps: fit.c_eps(eps) for eps in COMPARISON_EPS}, source


def execute_ke(cfg: RunConfig, compare: Path | None = None) -> KEOutcome:
    """Solve for the Einstein potential, check it, and compare with a stored limit."""
    bg = build_background(cfg)
    solution = solve_ke(bg, cfg.ke_tol)
    residual = verify_einstein(solution, bg)
    pinch = verify_volume_pinch(solution, bg, cfg.eps_list)
    uniqueness = None
    c_eps_source = None
    if compare is not None:
        other = from_potential(bg, read_scalar(compare, bg.chart))
        c_eps, c_eps_source = comparison_constants(bg, cfg, compare)
        uniqueness = compare_uniqueness(solution, other, bg, c_eps)

    output_dir = Path(cfg.output_dir)
    write_field(output_dir / "theta.crf", solution.theta.values)
    sections: dict[str, Any] = {
        "background": bg.describe(),
        "ke": {**solution.to_dict(), "einstein_residual": residual},
        "volume_pinch": pinch.to_dict(),
    }
    if uniqueness is not None:
        sections["uniqueness"] = {**uniqueness.to_dict(), "c_eps_source": c_eps_source}
    summary = build_summary(sections)
    write_summary(summary, output_dir / "ke.json")
    return KEOutcome(solution, residual, pinch, uniqueness, summary)


def flow_limit_solution(trajectory: Trajectory) -> KESolution:
    """The flow's limit potential viewed as a candidate Einstein potential."""
    limit = limit_potential(trajectory)
    return from_potential(trajectory.background, limit.phi)

