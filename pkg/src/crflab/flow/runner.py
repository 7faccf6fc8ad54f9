"""Flow driver: run to convergence or ``t_max`` and collect snapshots."""

from __future__ import annotations

from collections.abc import Callable

from crflab.background import BackgroundData
from crflab.errors import ConfigError
from crflab.flow.equation import initial_state
from crflab.flow.integrator import LANDING_TOL, step
from crflab.flow.models import FlowConfig, LimitPotential, Snapshot, Trajectory
from crflab.geometry import MetricField, ddbar
from crflab.logging import get_logger

_log = get_logger("crflab.flow")

SnapshotHook = Callable[[Snapshot], None]


def run(
    bg: BackgroundData,
    cfg: FlowConfig,
    on_snapshot: SnapshotHook | None = None,
) -> Trajectory:
    """Evolve ``phi`` from zero; snapshots land exactly on multiples of the cadence."""
    state = initial_state(bg)
    snapshots = [state.snapshot()]
    if on_snapshot is not None:
        on_snapshot(snapshots[0])
    _log.info(
        "flow.started: scenario=%s scheme=%s t_max=%s cadence=%s",
        bg.scenario,
        cfg.scheme,
        cfg.t_max,
        cfg.snapshot_every,
    )

    index = 1
    converged = False
    while state.t < cfg.t_max - LANDING_TOL:
        target = min(index * cfg.snapshot_every, cfg.t_max)
        state = step(state, cfg, bg, t_stop=target)
        landed = abs(state.t - target) <= LANDING_TOL
        sup_phidot = state.phidot.sup_abs(bg.pole_mask)
        converged = sup_phidot < cfg.convergence_tol
        if landed or converged:
            snap = state.snapshot()
            snapshots.append(snap)
            if on_snapshot is not None:
                on_snapshot(snap)
            if landed:
                index += 1
        if converged:
            _log.info(
                "flow.converged: t=%.6g sup_phidot=%.3e steps=%d",
                state.t,
                sup_phidot,
                state.step_count,
            )
            break

    if not converged:
        _log.info(
            "flow.finished: t=%.6g sup_phidot=%.3e steps=%d",
            state.t,
            state.phidot.sup_abs(bg.pole_mask),
            state.step_count,
        )
    return Trajectory(
        background=bg,
        config=cfg,
        snapshots=snapshots,
        converged=converged,
        steps_taken=state.step_count,
        rejected_steps=state.rejected_steps,
    )


def limit_potential(trajectory: Trajectory) -> LimitPotential:
    """Final potential, its ``sup |phidot|`` and ``omega_inf + ddbar phi``."""
    bg = trajectory.background
    final = trajectory.final
    omega = MetricField.from_form(bg.omega_inf + ddbar(final.phi))
    return LimitPotential(
        phi=final.phi,
        omega=omega,
        sup_phidot=trajectory.final_sup_phidot(),
        t=final.t,
        converged=trajectory.converged,
    )


def subsample(trajectory: Trajectory, every: int) -> Trajectory:
    """Keep every *every*-th snapshot (the first is always kept)."""
    if every < 1:
        raise ConfigError(f"subsample stride must be >= 1, got {every}")
    return trajectory.with_snapshots(trajectory.snapshots[::every])

