"""Run every lemma check over one trajectory."""

from __future__ import annotations

from collections.abc import Sequence

from crflab.background import verify_lemma33
from crflab.estimates.bounds import (
    check_lower_bounds,
    check_monotone,
    check_upper_bounds,
)
from crflab.estimates.evolution import check_evolution_identities, check_logtr_evolution
from crflab.estimates.models import EPS_GRID, CheckReport
from crflab.estimates.records import build_records
from crflab.estimates.trace import check_trace_bound, choose_constants
from crflab.flow import Trajectory, verify_flow_identity
from crflab.logging import get_logger

_log = get_logger("crflab.estimates")


def run_checks(
    trajectory: Trajectory,
    eps_list: Sequence[float] = EPS_GRID,
    t1: float = 1.0,
) -> CheckReport:
    """Check every lemma on *trajectory*; violations are reported, not raised."""
    bg = trajectory.background
    upper = check_upper_bounds(trajectory, t1)
    lower = check_lower_bounds(trajectory, eps_list, upper)
    monotone = check_monotone(trajectory)
    logtr = check_logtr_evolution(trajectory, bg)
    constants = choose_constants(bg, trajectory, logtr.c_evo)
    evolution = check_evolution_identities(trajectory, bg, constants.c0_shift)
    trace = check_trace_bound(trajectory, bg, constants)
    records = build_records(
        trajectory,
        bg,
        constants=constants,
        c_exponent=trace.c_exponent,
        evolution=evolution,
        logtr=logtr,
        eps_list=eps_list,
    )
    report = CheckReport(
        scenario=bg.scenario,
        lemma33=verify_lemma33(bg, list(eps_list)),
        upper=upper,
        lower=lower,
        monotone=monotone,
        evolution=evolution,
        logtr=logtr,
        constants=constants,
        trace=trace,
        flow_identity=verify_flow_identity(trajectory, bg),
        records=records,
    )
    _log.info(
        "estimates.checked: scenario=%s snapshots=%d violations=%s",
        bg.scenario,
        len(trajectory),
        ",".join(report.violations) or "none",
    )
    return report
