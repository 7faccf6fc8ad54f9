"""Checks on a Kähler-Einstein solution and the uniqueness comparison."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence

import numpy as np

from crflab.background import BackgroundData
from crflab.einstein.models import (
    ComparisonEntry,
    KESolution,
    PinchEntry,
    UniquenessReport,
    VolumePinchReport,
)
from crflab.errors import ConfigError
from crflab.estimates import EPS_GRID
from crflab.flow import einstein_residual, log_volume_ratio

DELTAS = (0.1, 0.01)
COMPARISON_EPS = (0.1, 1.0)


def verify_einstein(sol: KESolution, bg: BackgroundData) -> float:
    """``||Ric(omega_KE) + omega_KE||`` over unmasked points."""
    return einstein_residual(bg, sol.omega)


def verify_volume_pinch(
    sol: KESolution, bg: BackgroundData, eps_list: Sequence[float] = EPS_GRID
) -> VolumePinchReport:
    """Extremes of ``omega_KE^n / Omega`` and ``omega_KE^n / (e^{eps psi} Omega)``."""
    unmasked = bg.unmasked
    log_ratio = log_volume_ratio(bg, sol.omega).values[unmasked]
    psi = bg.psi.values[unmasked]
    entries: list[PinchEntry] = []
    for eps in eps_list:
        if not 0.0 < eps <= 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1], got {eps}")
        shifted = log_ratio - eps * psi
        entries.append(
            PinchEntry(eps, float(np.exp(shifted.max())), float(np.exp(shifted.min())))
        )
    return VolumePinchReport(
        sup_volume_ratio=float(np.exp(log_ratio.max())),
        inf_volume_ratio=float(np.exp(log_ratio.min())),
        entries=entries,
    )


def compare_uniqueness(
    sol_a: KESolution,
    sol_b: KESolution,
    bg: BackgroundData,
    c_eps: Mapping[float, float] | None = None,
    deltas: Sequence[float] = DELTAS,
    eps_list: Sequence[float] = COMPARISON_EPS,
) -> UniquenessReport:
    """Sup difference of the potentials and the minimum-principle comparison.

    For each ``(delta, eps)`` the unmasked minimum of
    ``Q = theta_A - (1 - delta) theta_B - delta eps psi`` must be at least
    ``n log(1 - delta) - delta C_eps``. ``C_eps`` defaults to the measured
    ``max(0, -inf(theta_B - eps psi))``; pass fitted lower-bound constants to
    use those instead.
    """
    unmasked = bg.unmasked
    n = bg.complex_dim
    theta_a = sol_a.theta.values[unmasked]
    theta_b = sol_b.theta.values[unmasked]
    psi = bg.psi.values[unmasked]

    entries: list[ComparisonEntry] = []
    for delta in deltas:
        if not 0.0 < delta < 1.0:
            raise ConfigError(f"delta must lie in (0, 1), got {delta}")
        for eps in eps_list:
            if c_eps is not None and eps in c_eps:
                constant = c_eps[eps]
            else:
                constant = max(0.0, -float(np.min(theta_b - eps * psi)))
            q = theta_a - (1.0 - delta) * theta_b - delta * eps * psi
            entries.append(
                ComparisonEntry(
                    delta=delta,
                    epsilon=eps,
                    c_eps=constant,
                    min_q=float(np.min(q)),
                    bound=n * math.log1p(-delta) - delta * constant,
                )
            )
    return UniquenessReport(float(np.max(np.abs(theta_a - theta_b))), entries)
