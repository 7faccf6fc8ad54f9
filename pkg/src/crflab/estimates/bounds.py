"""Upper and lower bounds on the potential, its time derivative and the volume."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from crflab.errors import ConfigError
from crflab.estimates.models import (
    EPS_GRID,
    LowerBoundEntry,
    LowerBoundFit,
    MonotoneEntry,
    MonotoneReport,
    UpperBoundFit,
)
from crflab.estimates.series import stability
from crflab.flow import Trajectory, log_volume_ratio, snapshot_metric
from crflab.logging import get_logger

_log = get_logger("crflab.estimates")

MONOTONE_TOL = 1e-8


def _log_ratios(trajectory: Trajectory) -> list[np.ndarray]:
    bg = trajectory.background
    return [
        log_volume_ratio(bg, snapshot_metric(bg, snap)).values
        for snap in trajectory.snapshots
    ]


def check_upper_bounds(trajectory: Trajectory, t1: float = 1.0) -> UpperBoundFit:
    """Running sups of ``phi``, ``phidot e^t / t`` and ``omega^n / Omega``."""
    if t1 <= 0:
        raise ConfigError(f"t1 must be positive, got {t1}")
    bg = trajectory.background
    mask = bg.pole_mask
    times = list(trajectory.times)
    sup_phi = [s.phi.sup(mask) for s in trajectory.snapshots]
    sup_vol = [float(np.exp(np.max(r[~mask]))) for r in _log_ratios(trajectory)]

    late = [
        (s.t, s.phidot.sup(mask)) for s in trajectory.snapshots if s.t >= t1 - 1e-12
    ]
    rate_times = [t for t, _ in late]
    rates = [v * math.exp(t) / t for t, v in late]
    if not rates:
        # Converged before t1: phidot has already vanished.
        rate_times, rates = [times[-1]], [0.0]

    fit = UpperBoundFit(
        c_phi=stability(times, sup_phi),
        c_phidot=stability(rate_times, rates),
        c_vol=stability(times, sup_vol),
        t1=t1,
    )
    _log.debug(
        "estimates.upper_bounds: c_phi=%.6g c_phidot=%.6g c_vol=%.6g",
        fit.c_phi.value,
        fit.c_phidot.value,
        fit.c_vol.value,
    )
    return fit


def check_lower_bounds(
    trajectory: Trajectory,
    eps_list: Sequence[float] = EPS_GRID,
    upper: UpperBoundFit | None = None,
) -> LowerBoundFit:
    """``Q_eps = log(omega^n / (e^{eps psi} Omega))`` bounded below for each epsilon.

    ``C_eps`` is the negated trajectory minimum of ``inf Q_eps`` (floored at 0).
    The implied bounds on ``phi`` and ``phidot`` use ``Q_eps = phidot + phi - eps psi``
    with the running sups of ``phidot`` and ``phi``.
    """
    bg = trajectory.background
    mask = bg.pole_mask
    upper = upper or check_upper_bounds(trajectory)
    times = list(trajectory.times)
    ratios = _log_ratios(trajectory)
    psi = bg.psi.values
    sup_phidot = max(s.phidot.sup(mask) for s in trajectory.snapshots)

    entries: list[LowerBoundEntry] = []
    for eps in eps_list:
        if not 0.0 < eps <= 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1], got {eps}")
        inf_q = [float(np.min((r - eps * psi)[~mask])) for r in ratios]
        q = stability(times, inf_q, kind="min")
        c_eps = max(0.0, -q.value)
        direct_phi = min(
            float(np.min((s.phi.values - eps * psi)[~mask]))
            for s in trajectory.snapshots
        )
        direct_phidot = min(
            float(np.min((s.phidot.values - eps * psi)[~mask]))
            for s in trajectory.snapshots
        )
        entry = LowerBoundEntry(
            epsilon=eps,
            inf_q=q,
            c_eps=c_eps,
            implied_phi=c_eps + max(sup_phidot, 0.0),
            implied_phidot=c_eps + max(upper.c_phi.value, 0.0),
            direct_phi=max(0.0, -direct_phi),
            direct_phidot=max(0.0, -direct_phidot),
        )
        if entry.violation:
            _log.warning("estimates.lower_bound_drift: eps=%s inf_q=%.6g", eps, q.value)
        entries.append(entry)
    return LowerBoundFit(entries)


def monotone_quantity(phi: np.ndarray, t: float, c: float) -> np.ndarray:
    """``phi + C (1 + t) e^{-t}``, whose time derivative is ``phidot - C t e^{-t}``."""
    return phi + c * (1.0 + t) * math.exp(-t)


def check_monotone(
    trajectory: Trajectory, t1_list: Sequence[float] = (0.5, 1.0, 2.0)
) -> MonotoneReport:
    """Largest pointwise increase of the monotone quantity after ``t1``."""
    mask = trajectory.background.pole_mask
    entries: list[MonotoneEntry] = []
    for t1 in t1_list:
        c = max(check_upper_bounds(trajectory, t1).c_phidot.value, 0.0)
        late = [s for s in trajectory.snapshots if s.t >= t1 - 1e-12]
        increase = 0.0
        for before, after in zip(late, late[1:], strict=False):
            q0 = monotone_quantity(before.phi.values, before.t, c)
            q1 = monotone_quantity(after.phi.values, after.t, c)
            increase = max(increase, float(np.max((q1 - q0)[~mask])))
        entries.append(MonotoneEntry(t1, c, increase, increase <= MONOTONE_TOL))
    return MonotoneReport(entries)
