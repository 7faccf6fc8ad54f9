"""Reference family, current family and the lemma checks on background data."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from crflab.background.models import BackgroundData, Lemma33Margin, Lemma33Report
from crflab.errors import ConfigError
from crflab.geometry import Form11Field, MetricField, min_eigenvalue
from crflab.logging import get_logger

_log = get_logger("crflab.background")

T0_STEP = 0.1
LEMMA33_TOL = 1e-8


def reference_metric(bg: BackgroundData, t: float) -> Form11Field:
    """``e^{-t} omega0 + (1 - e^{-t}) omega_inf``; exactly ``omega0`` at ``t = 0``."""
    if t < 0:
        raise ConfigError(f"reference metric needs t >= 0, got {t}")
    if t == 0:
        return bg.omega0.as_form()
    decay = math.exp(-t)
    coeff = decay * bg.omega0.coeff - math.expm1(-t) * bg.omega_inf.coeff
    return Form11Field(bg.chart, coeff)


def reference_derivative(bg: BackgroundData, t: float) -> Form11Field:
    """``d/dt`` of the reference family, ``e^{-t}(omega_inf - omega0)``."""
    return (bg.omega_inf - bg.omega0) * math.exp(-t)


@dataclass(frozen=True)
class ReferenceFamily:
    """Callable view ``t -> omega_hat_t`` over one background."""

    background: BackgroundData

    def __call__(self, t: float) -> Form11Field:
        return reference_metric(self.background, t)

    def current(self, t: float) -> Form11Field:
        return s_current(self.background, t)


def s_current(bg: BackgroundData, t: float) -> Form11Field:
    """``S_t = omega_hat_t + ddbar psi``."""
    return reference_metric(bg, t) + bg.ddbar_psi


def _deficit(bg: BackgroundData) -> float:
    return min_eigenvalue(bg.omega0 - bg.omega_inf, bg.omega0).inf()


def find_T0(bg: BackgroundData) -> float:
    """Smallest multiple of 0.1 after which
    ``e^{-t}(omega0 - omega_inf) >= -(c0/2) omega0`` holds."""
    deficit = _deficit(bg)
    if deficit >= -0.5 * bg.c0:
        return 0.0
    # e^{-t} deficit is increasing in t once the deficit is negative.
    steps = max(0, math.floor(math.log(-2.0 * deficit / bg.c0) / T0_STEP) - 1)
    while math.exp(-steps * T0_STEP) * deficit < -0.5 * bg.c0:
        steps += 1
    t0 = round(steps * T0_STEP, 10)
    _log.debug("background.t0: deficit=%.6g c0=%.6g t0=%.1f", deficit, bg.c0, t0)
    return t0


def current_lower_bound(bg: BackgroundData, times: list[float]) -> dict[float, float]:
    """Unmasked minimum eigenvalue of ``S_t`` against ``omega0`` at each time."""
    return {
        t: min_eigenvalue(s_current(bg, t), bg.omega0).inf(bg.pole_mask) for t in times
    }


def verify_lemma33(bg: BackgroundData, eps_list: list[float]) -> Lemma33Report:
    """Check ``omega_inf + eps ddbar psi - eps c0 omega0 >= 0`` on unmasked points."""
    margins: list[Lemma33Margin] = []
    for eps in eps_list:
        if not 0.0 < eps <= 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1], got {eps}")
        alpha = bg.omega_inf + bg.ddbar_psi * eps - bg.omega0 * (eps * bg.c0)
        margin = min_eigenvalue(alpha, bg.omega0).inf(bg.pole_mask)
        margins.append(Lemma33Margin(eps, margin, margin >= -LEMMA33_TOL))
        if margin < -LEMMA33_TOL:
            _log.warning(
                "background.lemma33_violation: eps=%s margin=%.3e", eps, margin
            )
    return Lemma33Report(c0=bg.c0, c_lemma33=bg.c_lemma33, margins=margins)


def measure_c0(
    omega_inf: Form11Field,
    ddbar_psi: Form11Field,
    omega0: MetricField,
    mask: np.ndarray,
) -> float:
    """Unmasked minimum eigenvalue of ``omega_inf + ddbar psi`` against ``omega0``."""
    return min_eigenvalue(omega_inf + ddbar_psi, omega0).inf(mask)
