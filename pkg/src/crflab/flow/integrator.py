"""Adaptive time stepping with positivity guards."""

from __future__ import annotations

import numpy as np

from crflab.background import BackgroundData
from crflab.errors import FlowBreakdownError, PositivityLossError
from crflab.flow.equation import make_state, rhs
from crflab.flow.models import FlowConfig, FlowState, Scheme
from crflab.geometry import MetricField, ScalarField
from crflab.geometry.operators import trace_array
from crflab.logging import get_logger

_log = get_logger("crflab.flow")

# Extent of the classical RK4 stability region along the negative real axis.
RK4_STABILITY = 2.785
MIN_DT = 1e-12
LANDING_TOL = 1e-12
GROWTH = 2.0


def flat_trace(omega: MetricField) -> np.ndarray:
    """``tr_omega(flat)``, the trace of the inverse metric."""
    n = omega.chart.complex_dim
    return trace_array(omega.inverse, np.broadcast_to(np.eye(n), omega.coeff.shape))


def stiffness_bound(omega: MetricField) -> float:
    """Upper bound on the spectral radius of ``Delta_omega - 1``."""
    k_max = float(np.max(np.abs(omega.chart.effective_wavenumbers())))
    return float(np.max(flat_trace(omega))) * 0.5 * k_max**2 + 1.0


def rk4_increment(
    bg: BackgroundData, phi: ScalarField, t: float, dt: float
) -> ScalarField:
    """Classical fourth-order Runge-Kutta update of ``phi`` over ``[t, t + dt]``."""
    k1 = rhs(bg, phi, t)
    k2 = rhs(bg, phi + k1 * (0.5 * dt), t + 0.5 * dt)
    k3 = rhs(bg, phi + k2 * (0.5 * dt), t + 0.5 * dt)
    k4 = rhs(bg, phi + k3 * dt, t + dt)
    return phi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)


def imex_increment(state: FlowState, dt: float) -> ScalarField:
    """Stabilized semi-implicit Euler step.

    The update solves ``(1 + dt (sigma |L_flat| + 1)) delta = dt phidot`` in
    Fourier space, with ``sigma`` bounding the metric's flat trace, so stiff
    modes are damped rather than amplified.
    """
    chart = state.phi.chart
    sigma = float(np.max(flat_trace(state.omega)))
    denominator = 1.0 + dt * (sigma * -chart.ddbar_trace_symbol() + 1.0)
    delta = chart.apply_symbol(dt * state.phidot.values, 1.0 / denominator)
    return state.phi + ScalarField(chart, delta)


def propose_dt(state: FlowState, cfg: FlowConfig) -> float:
    previous = cfg.dt_initial if state.dt_last is None else GROWTH * state.dt_last
    dt = min(cfg.dt_max, previous)
    if cfg.scheme is Scheme.rk4:
        dt = min(dt, cfg.safety * RK4_STABILITY / stiffness_bound(state.omega))
    return dt


def _min_eigenvalue(omega: MetricField) -> tuple[float, tuple[int, ...]]:
    eigen = np.linalg.eigvalsh(omega.coeff)[..., 0]
    worst = np.unravel_index(int(np.argmin(eigen)), eigen.shape)
    return float(eigen[worst]), tuple(int(i) for i in worst)


def step(
    state: FlowState,
    cfg: FlowConfig,
    bg: BackgroundData,
    t_stop: float | None = None,
) -> FlowState:
    """Advance one accepted step, halving on positivity loss.

    When *t_stop* is given the step never passes it and lands on it exactly
    if it is reachable within the proposed step.
    """
    proposed = dt = propose_dt(state, cfg)
    landing = False
    if t_stop is not None and state.t + dt >= t_stop - LANDING_TOL:
        dt = t_stop - state.t
        landing = True
    rejected = 0
    while True:
        if dt < MIN_DT:
            raise FlowBreakdownError(
                f"time step underflow at t={state.t:.6g} after {rejected} halvings"
            )
        t_new = t_stop if landing and t_stop is not None else state.t + dt
        try:
            if cfg.scheme is Scheme.rk4:
                phi = rk4_increment(bg, state.phi, state.t, dt)
            else:
                phi = imex_increment(state, dt)
            new = make_state(
                bg,
                phi,
                t_new,
                step_count=state.step_count + 1,
                rejected_steps=state.rejected_steps + rejected,
                dt_last=max(dt, proposed) if landing else dt,
            )
            lowest, where = _min_eigenvalue(new.omega)
            if lowest <= cfg.positivity_floor:
                raise PositivityLossError(
                    f"min eigenvalue {lowest:.3e} below floor",
                    index=where,
                    eigenvalue=lowest,
                )
            return new
        except PositivityLossError as exc:
            rejected += 1
            _log.debug(
                "flow.step_rejected: t=%.6g dt=%.3e index=%s eigenvalue=%s",
                state.t,
                dt,
                exc.index,
                exc.eigenvalue,
            )
            if rejected > cfg.max_halvings:
                raise FlowBreakdownError(
                    f"positivity lost at t={state.t:.6g} after {cfg.max_halvings} "
                    f"halvings (index={exc.index}, eigenvalue={exc.eigenvalue})"
                ) from exc
            dt *= 0.5
            landing = False
