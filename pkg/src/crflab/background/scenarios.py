"""Scenario builders producing validated :class:`BackgroundData`."""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from crflab.background.models import BackgroundData
from crflab.background.reference import measure_c0
from crflab.errors import ConfigError, ScenarioError
from crflab.geometry import (
    DifferentiationMode,
    Form11Field,
    GridChart,
    MetricField,
    ScalarField,
    VolumeFormField,
    ddbar,
    min_eigenvalue,
    top_power,
)
from crflab.logging import get_logger

_log = get_logger("crflab.background")

C0_SAFETY = 0.9
C_LEMMA33_FLOOR = 1e-8
POLE_MASK_RADIUS = 4.0
KAPPA_BISECTIONS = 50


def assemble_background(
    chart: GridChart,
    omega0: MetricField,
    omega_inf: Form11Field,
    volume_form: VolumeFormField,
    psi: ScalarField,
    pole_mask: np.ndarray,
    *,
    scenario: str,
    parameters: dict[str, Any],
    psi_delta: float | None = None,
    normalize_volume: bool = True,
    mass_matched: bool | None = None,
    c0: float | None = None,
) -> BackgroundData:
    """Measure ``c0`` and the barrier constant, normalize the volume, validate."""
    ddbar_psi = ddbar(psi)
    measured = measure_c0(omega_inf, ddbar_psi, omega0, pole_mask)
    if measured <= 0.0:
        raise ScenarioError(
            f"omega_inf + ddbar psi is not positive: min eigenvalue {measured:.4g}"
        )
    if c0 is None:
        c0 = C0_SAFETY * measured
    elif c0 > measured:
        raise ScenarioError(f"c0={c0} exceeds the measured lower bound {measured:.6g}")

    lower = min_eigenvalue(ddbar_psi, omega0).inf(pole_mask)
    c_lemma33 = max(-lower / C0_SAFETY, 0.0) + C_LEMMA33_FLOOR

    if normalize_volume:
        target = top_power(omega0).total_mass
        volume_form = volume_form.scaled(target / volume_form.total_mass)

    bg = BackgroundData(
        chart=chart,
        omega0=omega0,
        omega_inf=omega_inf,
        volume_form=volume_form,
        psi=psi,
        pole_mask=pole_mask,
        c0=c0,
        c_lemma33=c_lemma33,
        psi_delta=psi_delta,
        scenario=scenario,
        parameters=parameters,
        volume_normalized=normalize_volume if mass_matched is None else mass_matched,
    )
    _log.info(
        "background.built: scenario=%s n=%d resolution=%d c0=%.6g c_lemma33=%.6g",
        scenario,
        chart.complex_dim,
        chart.resolution,
        c0,
        c_lemma33,
    )
    return bg


# -- smooth building blocks ---------------------------------------------------


def _wave(chart: GridChart, axis: int, fn: Any, shift: float = 0.0) -> np.ndarray:
    coords = chart.coordinates()
    return fn(2.0 * np.pi * (coords[axis] / chart.period + shift))


def smooth_initial_metric(
    chart: GridChart, amplitude: float = 0.3, phase: float = 0.0
) -> MetricField:
    """``(1 + a sin(2 pi (x1 + phase)) sin(2 pi y1)) Id``."""
    if not 0.0 <= amplitude < 1.0:
        raise ConfigError(f"omega0 amplitude must lie in [0, 1), got {amplitude}")
    factor = 1.0 + amplitude * _wave(chart, 0, np.sin, phase) * _wave(chart, 1, np.sin)
    return MetricField.from_form(Form11Field.conformal(ScalarField(chart, factor)))


def smooth_limit_form(chart: GridChart, base: float = 0.5) -> Form11Field:
    """``b Id + 0.2 ddbar(bump)`` with a low-mode periodic bump."""
    bump = _wave(chart, 0, np.cos) + 0.5 * _wave(chart, 1, np.sin)
    if chart.complex_dim == 2:
        bump = bump + _wave(chart, 2, np.cos)
    bump = bump / (4.0 * np.pi**2)
    return Form11Field.identity(chart, base) + ddbar(ScalarField(chart, bump)) * 0.2


def smooth_volume(chart: GridChart) -> VolumeFormField:
    v = 0.2 * _wave(chart, 1, np.cos)
    if chart.complex_dim == 2:
        v = v + 0.1 * _wave(chart, 2, np.sin)
    return VolumeFormField(chart, np.exp(v))


def _no_pole(chart: GridChart) -> tuple[ScalarField, np.ndarray]:
    return ScalarField.constant(chart, 0.0), np.zeros(chart.shape, dtype=bool)


# -- scenarios ----------------------------------------------------------------


def scenario_smooth(
    resolution: int,
    n: int,
    *,
    amplitude: float = 0.3,
    phase: float = 0.0,
    mode: DifferentiationMode = DifferentiationMode.spectral,
) -> BackgroundData:
    chart = GridChart(n, resolution, mode=mode)
    psi, mask = _no_pole(chart)
    return assemble_background(
        chart,
        smooth_initial_metric(chart, amplitude, phase),
        smooth_limit_form(chart),
        smooth_volume(chart),
        psi,
        mask,
        scenario="smooth",
        parameters={"amplitude": amplitude, "phase": phase},
    )


def pole_mask(chart: GridChart, radius: float = POLE_MASK_RADIUS) -> np.ndarray:
    """Points within *radius* cells of the pole ``z1 = 0``."""
    return chart.cell_distance((0, 0)) <= radius


def log_pole(chart: GridChart, delta: float) -> np.ndarray:
    """``log((sin^2(pi x1) + sin^2(pi y1) + delta^2) / (1 + delta^2))``, low-passed.

    The filter removes the unresolved part of the spike when ``delta`` is
    below the grid spacing.
    """
    coords = chart.coordinates()
    s = (
        np.sin(np.pi * coords[0] / chart.period) ** 2
        + np.sin(np.pi * coords[1] / chart.period) ** 2
    )
    raw = np.log((s + delta**2) / (1.0 + delta**2))
    return chart.lowpass(raw)


def scenario_degenerate(
    resolution: int,
    n: int,
    *,
    kappa: float = 0.05,
    delta: float = 1e-2,
    mode: DifferentiationMode = DifferentiationMode.spectral,
) -> BackgroundData:
    """Smooth scenario plus a regularized log-pole barrier at ``z1 = 0``."""
    if kappa <= 0.0:
        raise ConfigError(f"kappa must be positive, got {kappa}")
    if delta <= 0.0:
        raise ConfigError(f"delta must be positive, got {delta}")
    chart = GridChart(n, resolution, mode=mode)
    mask = pole_mask(chart)
    omega0 = smooth_initial_metric(chart)
    omega_inf = smooth_limit_form(chart)

    unit = log_pole(chart, delta)
    unit_ddbar = ddbar(ScalarField(chart, unit))

    def lowest(k: float) -> float:
        return measure_c0(omega_inf, unit_ddbar * k, omega0, mask)

    if lowest(kappa) <= 0.0:
        lo, hi = 0.0, kappa
        for _ in range(KAPPA_BISECTIONS):
            mid = 0.5 * (lo + hi)
            if lowest(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        _log.warning("background.kappa_rejected: kappa=%s kappa_max=%.6g", kappa, lo)
        raise ScenarioError(
            f"kappa={kappa} breaks omega_inf + ddbar psi > 0; kappa_max={lo:.6g}",
            kappa_max=lo,
        )

    values = kappa * unit
    values = values - float(np.max(values[~mask]))
    return assemble_background(
        chart,
        omega0,
        omega_inf,
        smooth_volume(chart),
        ScalarField(chart, values, regularized=True),
        mask,
        scenario="degenerate",
        parameters={"kappa": kappa, "delta": delta, "mask_radius": POLE_MASK_RADIUS},
        psi_delta=delta,
    )


def scenario_homogeneous(
    n: int,
    a0: float,
    a_inf: float,
    omega_const: float,
    *,
    resolution: int = 16,
    c0: float | None = None,
    mode: DifferentiationMode = DifferentiationMode.spectral,
) -> BackgroundData:
    """Spatially constant data.

    The flow reduces to the ODE ``phidot = log(omega_hat_t^n / Omega) - phi``.
    """
    for name, value in (("a0", a0), ("a_inf", a_inf), ("omega_const", omega_const)):
        if value <= 0.0:
            raise ConfigError(f"{name} must be positive, got {value}")
    chart = GridChart(n, resolution, mode=mode)
    psi, mask = _no_pole(chart)
    return assemble_background(
        chart,
        MetricField.from_form(Form11Field.identity(chart, a0)),
        Form11Field.identity(chart, a_inf),
        VolumeFormField(chart, np.full(chart.shape, float(omega_const))),
        psi,
        mask,
        scenario="homogeneous",
        parameters={"a0": a0, "a_inf": a_inf, "omega_const": omega_const},
        normalize_volume=False,
        c0=c0,
    )


def scenario_fixed_point(
    n: int,
    a: float = 1.0,
    *,
    resolution: int = 16,
    mode: DifferentiationMode = DifferentiationMode.spectral,
) -> BackgroundData:
    """Homogeneous data already at its Einstein point: ``Omega = a^n n!``."""
    bg = scenario_homogeneous(
        n, a, a, a**n * math.factorial(n), resolution=resolution, mode=mode
    )
    return _renamed(bg, "fixed-point")


def scenario_torsion(
    resolution: int,
    *,
    amplitude: float = 0.3,
    mode: DifferentiationMode = DifferentiationMode.spectral,
) -> BackgroundData:
    """n = 2 with the non-Kähler initial metric ``diag(1, e^{h(z1)})``."""
    chart = GridChart(2, resolution, mode=mode)
    h = amplitude * _wave(chart, 0, np.sin)
    omega0 = MetricField.from_form(
        Form11Field.diagonal(chart, [np.ones(chart.shape), np.exp(h)])
    )
    psi, mask = _no_pole(chart)
    return assemble_background(
        chart,
        omega0,
        smooth_limit_form(chart),
        smooth_volume(chart),
        psi,
        mask,
        scenario="torsion",
        parameters={"amplitude": amplitude},
    )


def replace_initial_metric(bg: BackgroundData, omega0: MetricField) -> BackgroundData:
    """Same ``omega_inf``, volume form and barrier with another initial metric."""
    if omega0.chart != bg.chart:
        raise ScenarioError("replacement metric lives on a different chart")
    return assemble_background(
        bg.chart,
        omega0,
        bg.omega_inf,
        bg.volume_form,
        bg.psi,
        np.array(bg.pole_mask),
        scenario=bg.scenario,
        parameters={**bg.parameters, "replaced_initial_metric": True},
        psi_delta=bg.psi_delta,
        normalize_volume=False,
        mass_matched=bg.volume_normalized,
    )


def _renamed(bg: BackgroundData, scenario: str) -> BackgroundData:
    return BackgroundData(
        chart=bg.chart,
        omega0=bg.omega0,
        omega_inf=bg.omega_inf,
        volume_form=bg.volume_form,
        psi=bg.psi,
        pole_mask=bg.pole_mask,
        c0=bg.c0,
        c_lemma33=bg.c_lemma33,
        psi_delta=bg.psi_delta,
        scenario=scenario,
        parameters=bg.parameters,
        volume_normalized=bg.volume_normalized,
    )
