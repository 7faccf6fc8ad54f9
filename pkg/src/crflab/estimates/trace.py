"""Trace bound of the flow metric against the initial metric near the pole."""

from __future__ import annotations

import math

import numpy as np
from scipy import stats

from crflab.background import BackgroundData, current_lower_bound, find_T0
from crflab.background.scenarios import POLE_MASK_RADIUS
from crflab.errors import ScenarioError
from crflab.estimates.evolution import phi_tilde_shift
from crflab.estimates.models import Constants, TraceBoundFit
from crflab.estimates.series import stability
from crflab.flow import Trajectory, snapshot_metric
from crflab.geometry import generalized_eigenvalues, min_eigenvalue
from crflab.geometry.operators import trace_array
from crflab.logging import get_logger

_log = get_logger("crflab.estimates")

SHELL_COUNT = 6
DISAGREEMENT_FACTOR = 2.0


def constants_from(c_evo: float, s_min: float) -> float:
    """Smallest ``A >= 0`` with ``(A + 1) s_min >= C_evo + 1``."""
    if s_min <= 0.0:
        raise ScenarioError(
            f"S_t is not positive after T0 (min eigenvalue {s_min:.3e})"
        )
    return max((c_evo + 1.0) / s_min - 1.0, 0.0)


def choose_constants(
    bg: BackgroundData, trajectory: Trajectory, c_evo: float
) -> Constants:
    """``C0`` from the potential so far and ``A`` from ``C_evo``.

    ``A`` is the smallest value with ``(A + 1) s_min >= C_evo + 1``, where
    ``s_min`` is the unmasked minimum eigenvalue of ``S_t`` over the snapshot
    times past ``T0``, ``T0`` itself and the ``t -> infinity`` limit
    ``omega_inf + ddbar psi``.
    """
    t0 = find_T0(bg)
    times = [t0, *(float(t) for t in trajectory.times if t >= t0)]
    lower = current_lower_bound(bg, times)
    limit = min_eigenvalue(bg.omega_inf + bg.ddbar_psi, bg.omega0).inf(bg.pole_mask)
    s_min = min(*lower.values(), limit)
    constants = Constants(
        a=constants_from(c_evo, s_min),
        c0_shift=phi_tilde_shift(trajectory, unmasked_only=True),
        c_evo=c_evo,
        s_min=s_min,
        t0=t0,
    )
    _log.info(
        "estimates.constants: A=%.6g C0=%.6g C_evo=%.6g s_min=%.6g T0=%.1f",
        constants.a,
        constants.c0_shift,
        c_evo,
        s_min,
        t0,
    )
    return constants


def _shell_regression(
    bg: BackgroundData, log_trace_max: np.ndarray
) -> tuple[float, float, float] | None:
    """Fit shell-averaged ``log tr`` against shell-averaged ``-psi``."""
    radius = float(bg.parameters.get("mask_radius", POLE_MASK_RADIUS))
    distance = np.rint(bg.chart.cell_distance((0, 0)))
    xs: list[float] = []
    ys: list[float] = []
    for shell in range(math.floor(radius) + 1, math.floor(radius) + 1 + SHELL_COUNT):
        selected = distance == shell
        if not np.any(selected):
            continue
        xs.append(float(np.mean(-bg.psi.values[selected])))
        ys.append(float(np.mean(log_trace_max[selected])))
    if len(xs) < 3 or np.ptp(xs) == 0.0:
        return None
    fit = stats.linregress(xs, ys)
    return float(fit.slope), float(fit.intercept), float(fit.rvalue**2)


def check_trace_bound(
    trajectory: Trajectory, bg: BackgroundData, constants: Constants
) -> TraceBoundFit:
    """Sup of ``Q = log tr - A phi_tilde + 1/(phi_tilde + C0)`` and the fitted exponent.

    ``C`` comes from the shell regression when the background has a pole and
    is 0 otherwise. ``C'`` is the observed sup of ``tr e^{C psi}`` and ``C''``
    bounds both sides of ``e^{C psi} omega0 / C'' <= omega <= C'' e^{-C psi} omega0``.
    """
    unmasked = bg.unmasked
    n = bg.complex_dim
    a, c0_shift = constants.a, constants.c0_shift
    h0 = bg.omega0.inverse
    log_det0 = bg.omega0.log_det
    psi = bg.psi.values

    times = [float(t) for t in trajectory.times]
    q_sup: list[float] = []
    traces: list[np.ndarray] = []
    eigenvalues: list[np.ndarray] = []
    phong_sturm_ok = True
    gm_am = math.inf
    trace_power = math.inf
    for snap in trajectory.snapshots:
        omega = snapshot_metric(bg, snap)
        tr = trace_array(h0, omega.coeff)
        tilde = snap.phi.values - psi
        frac = 1.0 / (tilde + c0_shift)
        q = np.log(tr) - a * tilde + frac
        q_sup.append(float(np.max(q[unmasked])))
        phong_sturm_ok &= bool(np.all((frac[unmasked] > 0) & (frac[unmasked] <= 1.0)))

        inverse_trace = trace_array(omega.inverse, bg.omega0.coeff)
        volume_ratio = np.exp(omega.log_det - log_det0)
        arithmetic = inverse_trace / n
        geometric = volume_ratio ** (-1.0 / n)
        gap = (arithmetic - geometric) / arithmetic
        gm_am = min(gm_am, float(np.min(gap[unmasked])))
        bound = inverse_trace ** (n - 1) * volume_ratio / math.factorial(n - 1)
        trace_power = min(trace_power, float(np.min(((bound - tr) / tr)[unmasked])))

        traces.append(tr)
        eigenvalues.append(generalized_eigenvalues(omega, bg.omega0))

    log_trace_max = np.log(np.max(np.stack(traces), axis=0))
    regression = _shell_regression(bg, log_trace_max) if bg.has_pole else None
    slope = intercept = r_squared = None
    c_exponent = 0.0
    if regression is not None:
        slope, intercept, r_squared = regression
        c_exponent = max(slope, 0.0)

    weight = np.exp(c_exponent * psi)
    c_prime = max(float(np.max((tr * weight)[unmasked])) for tr in traces)
    sup_trace = max(float(np.max(tr[unmasked])) for tr in traces)
    c_double = [
        float(np.max(np.maximum(lam[..., -1] * weight, weight / lam[..., 0])[unmasked]))
        for lam in eigenvalues
    ]

    disagreement = False
    if c_exponent > 0.0 and a > 0.0:
        disagreement = max(c_exponent, a) / min(c_exponent, a) > DISAGREEMENT_FACTOR

    fit = TraceBoundFit(
        q_sup=stability(times, q_sup),
        c_exponent=c_exponent,
        c_prime=c_prime,
        c_double_prime=stability(times, c_double),
        regression_slope=slope,
        regression_intercept=intercept,
        r_squared=r_squared,
        a_exponent=a,
        exponent_disagreement=disagreement,
        phong_sturm_ok=phong_sturm_ok,
        gm_am_margin=gm_am,
        trace_power_margin=trace_power,
        sup_trace=sup_trace,
        sup_trace_weighted=c_prime,
    )
    if disagreement:
        _log.warning(
            "estimates.exponent_disagreement: regression=%.6g A=%.6g", c_exponent, a
        )
    if not phong_sturm_ok:
        _log.warning("estimates.phong_sturm_range: C0=%.6g", c0_shift)
    return fit
