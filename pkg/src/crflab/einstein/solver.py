"""Damped inexact Newton for ``log((omega_inf + ddbar theta)^n / Omega) = theta``."""

from __future__ import annotations

import numpy as np
from scipy.sparse.linalg import LinearOperator, bicgstab

from crflab.background import BackgroundData
from crflab.einstein.models import KESolution
from crflab.errors import PositivityLossError, SolverError
from crflab.flow import log_volume_ratio
from crflab.flow.integrator import flat_trace
from crflab.geometry import MetricField, ScalarField, ddbar, laplacian
from crflab.logging import get_logger

_log = get_logger("crflab.einstein")

MAX_NEWTON = 100
MAX_HALVINGS = 30
KRYLOV_RTOL = 1e-2
KRYLOV_MAXITER = 200


def ke_metric(bg: BackgroundData, theta: ScalarField) -> MetricField:
    return MetricField.from_form(bg.omega_inf + ddbar(theta))


def ke_residual(
    bg: BackgroundData, theta: ScalarField, omega: MetricField
) -> ScalarField:
    """``F(theta) = log(omega_theta^n / Omega) - theta``."""
    return log_volume_ratio(bg, omega) - theta


def _jacobian(omega: MetricField) -> tuple[LinearOperator, LinearOperator]:
    """``Delta_omega - 1`` and its flat spectral preconditioner."""
    chart = omega.chart
    shape = chart.shape
    size = int(np.prod(shape))
    # Mean eigenvalue of the inverse metric scales the flat Laplacian symbol.
    sigma = float(np.mean(flat_trace(omega))) / chart.complex_dim
    inverse_symbol = 1.0 / (sigma * chart.ddbar_trace_symbol() - 1.0)

    def matvec(v: np.ndarray) -> np.ndarray:
        field = ScalarField(chart, np.real(v).reshape(shape))
        return (laplacian(omega, field).values - field.values).ravel()

    def precondition(v: np.ndarray) -> np.ndarray:
        return chart.apply_symbol(np.real(v).reshape(shape), inverse_symbol).ravel()

    operator = LinearOperator((size, size), matvec=matvec, dtype=float)
    preconditioner = LinearOperator((size, size), matvec=precondition, dtype=float)
    return operator, preconditioner


def solve_ke(
    bg: BackgroundData,
    tol: float = 1e-8,
    theta0: ScalarField | None = None,
    max_iter: int = MAX_NEWTON,
) -> KESolution:
    """Solve ``F(theta) = 0`` by damped Newton with a preconditioned Krylov inner solve.

    Each step solves ``(Delta_omega - 1) d = -F`` to relative accuracy
    ``KRYLOV_RTOL`` and halves the step until the metric stays positive and
    ``||F||`` decreases.
    """
    theta = theta0 if theta0 is not None else ScalarField.constant(bg.chart, 0.0)
    try:
        omega = ke_metric(bg, theta)
    except PositivityLossError as exc:
        raise SolverError(f"initial guess is not admissible: {exc}") from exc

    residual = ke_residual(bg, theta, omega)
    norm = residual.sup_abs()
    history = [norm]
    for iteration in range(1, max_iter + 1):
        if norm <= tol:
            break
        operator, preconditioner = _jacobian(omega)
        direction, info = bicgstab(
            operator,
            -residual.values.ravel(),
            rtol=KRYLOV_RTOL,
            maxiter=KRYLOV_MAXITER,
            M=preconditioner,
        )
        if info < 0:
            raise SolverError(f"Krylov breakdown (info={info})", history)
        update = ScalarField(bg.chart, direction.reshape(bg.chart.shape))

        scale = 1.0
        for _ in range(MAX_HALVINGS + 1):
            candidate = theta + update * scale
            try:
                trial_omega = ke_metric(bg, candidate)
            except PositivityLossError:
                scale *= 0.5
                continue
            trial = ke_residual(bg, candidate, trial_omega)
            if trial.sup_abs() < norm:
                break
            scale *= 0.5
        else:
            raise SolverError(
                f"line search failed after {MAX_HALVINGS} halvings at step {iteration}",
                history,
            )

        theta, omega, residual = candidate, trial_omega, trial
        norm = residual.sup_abs()
        history.append(norm)
        _log.debug(
            "ke.newton_iter: iter=%d residual=%.3e step=%.3g krylov_info=%d",
            iteration,
            norm,
            scale,
            info,
        )
    else:
        if norm > tol:
            raise SolverError(
                f"Newton did not reach {tol:.1e} in {max_iter} steps "
                f"(residual {norm:.3e})",
                history,
            )

    iterations = len(history) - 1
    _log.info("ke.converged: iters=%d residual=%.3e", iterations, norm)
    return KESolution(theta, omega, norm, iterations, history)


def from_potential(bg: BackgroundData, theta: ScalarField) -> KESolution:
    """Wrap a potential from another source (a flow limit) without iterating."""
    omega = ke_metric(bg, theta)
    norm = ke_residual(bg, theta, omega).sup_abs()
    return KESolution(theta, omega, norm, 0, [norm])
