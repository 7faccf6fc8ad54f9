"""The parabolic complex Monge-Ampere equation and its model Ricci form.

The Chern-Ricci form of a flow metric is taken relative to the background
pair, ``Ric(omega) := -ddbar log(omega^n / Omega) - omega_inf``. With that
definition ``omega = omega_hat_t + ddbar phi`` solves the normalized flow
exactly when ``phi`` solves ``phidot = log(omega^n / Omega) - phi``.
"""

from __future__ import annotations

import math

import numpy as np

from crflab.background import BackgroundData, reference_metric
from crflab.flow.models import FlowState, Snapshot
from crflab.geometry import Form11Field, MetricField, ScalarField, ddbar


def flow_metric(bg: BackgroundData, phi: ScalarField, t: float) -> MetricField:
    """``omega_hat_t + ddbar phi``; raises ``PositivityLossError`` when not positive."""
    return MetricField.from_form(reference_metric(bg, t) + ddbar(phi))


def log_volume_ratio(bg: BackgroundData, omega: MetricField) -> ScalarField:
    """``log(omega^n / Omega)`` from the log-determinant."""
    n = bg.chart.complex_dim
    log_top = omega.log_det + math.log(math.factorial(n))
    values = log_top - np.log(bg.volume_form.density)
    return ScalarField(bg.chart, values)


def rhs(bg: BackgroundData, phi: ScalarField, t: float) -> ScalarField:
    """``log((omega_hat_t + ddbar phi)^n / Omega) - phi``."""
    return log_volume_ratio(bg, flow_metric(bg, phi, t)) - phi


def make_state(
    bg: BackgroundData,
    phi: ScalarField,
    t: float,
    *,
    step_count: int = 0,
    rejected_steps: int = 0,
    dt_last: float | None = None,
) -> FlowState:
    """Build a state with fresh caches."""
    omega = flow_metric(bg, phi, t)
    phidot = log_volume_ratio(bg, omega) - phi
    return FlowState(t, phi, phidot, omega, step_count, rejected_steps, dt_last)


def initial_state(bg: BackgroundData) -> FlowState:
    """``phi = 0`` at ``t = 0``."""
    return make_state(bg, ScalarField.constant(bg.chart, 0.0), 0.0)


def snapshot_metric(bg: BackgroundData, snap: Snapshot) -> MetricField:
    return flow_metric(bg, snap.phi, snap.t)


def ricci_form(bg: BackgroundData, omega: MetricField) -> Form11Field:
    """``-ddbar log(omega^n / Omega) - omega_inf``."""
    return -ddbar(log_volume_ratio(bg, omega)) - bg.omega_inf


def einstein_residual(bg: BackgroundData, omega: MetricField) -> float:
    """``||Ric(omega) + omega||`` over unmasked points."""
    return (ricci_form(bg, omega) + omega).sup_norm(bg.pole_mask)
