"""Per-snapshot diagnostics records assembled after a run."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from crflab.background import BackgroundData, s_current
from crflab.estimates.models import (
    EPS_GRID,
    Constants,
    DiagnosticsRecord,
    EvolutionReport,
    LogTraceReport,
    ResidualSeries,
)
from crflab.flow import (
    Trajectory,
    einstein_residual,
    exact_flow_residual,
    log_volume_ratio,
    snapshot_metric,
)
from crflab.geometry import min_eigenvalue
from crflab.geometry.operators import trace_array


def _value_at(series: ResidualSeries, t: float) -> float:
    """Residual at *t*, NaN when the series has no entry there."""
    value = series.at(t)
    return math.nan if value is None else value


def build_records(
    trajectory: Trajectory,
    bg: BackgroundData,
    *,
    constants: Constants,
    c_exponent: float = 0.0,
    evolution: EvolutionReport | None = None,
    logtr: LogTraceReport | None = None,
    eps_list: Sequence[float] = EPS_GRID,
) -> list[DiagnosticsRecord]:
    """One record per snapshot; every reduction skips masked points.

    Identity residuals use the exact time derivative, which exists at every
    snapshot, so each record has the same columns. A snapshot missing from a
    residual series is written as NaN.
    """
    mask = bg.pole_mask
    unmasked = bg.unmasked
    psi = bg.psi.values
    weight = np.exp(c_exponent * psi)
    records: list[DiagnosticsRecord] = []
    for snap in trajectory.snapshots:
        omega = snapshot_metric(bg, snap)
        log_ratio = log_volume_ratio(bg, omega).values
        tr = trace_array(bg.omega0.inverse, omega.coeff)
        tilde = snap.phi.values - psi
        q = np.log(tr) - constants.a * tilde + 1.0 / (tilde + constants.c0_shift)

        residuals = {"flow": exact_flow_residual(bg, snap)}
        if evolution is not None:
            for name, series in evolution.exact.items():
                residuals[name] = _value_at(series, snap.t)
        if logtr is not None:
            residuals["logtr"] = _value_at(logtr.exact, snap.t)

        records.append(
            DiagnosticsRecord(
                t=snap.t,
                sup_phi=snap.phi.sup(mask),
                sup_phidot=snap.phidot.sup(mask),
                sup_volume_ratio=float(np.exp(np.max(log_ratio[unmasked]))),
                inf_q_eps={
                    eps: float(np.min((log_ratio - eps * psi)[unmasked]))
                    for eps in eps_list
                },
                sup_trace=float(np.max(tr[unmasked])),
                sup_trace_weighted=float(np.max((tr * weight)[unmasked])),
                q_phong_sturm_sup=float(np.max(q[unmasked])),
                s_t_min_eig=min_eigenvalue(s_current(bg, snap.t), bg.omega0).inf(mask),
                einstein_residual=einstein_residual(bg, omega),
                identity_residuals=residuals,
            )
        )
    return records
