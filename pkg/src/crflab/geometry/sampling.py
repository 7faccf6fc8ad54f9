"""Seeded random smooth test fields (low-order trigonometric polynomials)."""

from __future__ import annotations

import numpy as np

from crflab.geometry.fields import Form11Field, MetricField, ScalarField, VectorField
from crflab.geometry.grid import GridChart


def trig_polynomial(
    chart: GridChart,
    rng: np.random.Generator,
    max_mode: int = 2,
    amplitude: float = 1.0,
) -> np.ndarray:
    """Real trigonometric polynomial with integer modes up to *max_mode* per axis."""
    coords = chart.coordinates()
    values = np.zeros(chart.shape)
    terms = 2 * chart.real_dim
    for _ in range(terms):
        modes = rng.integers(-max_mode, max_mode + 1, size=chart.real_dim)
        if not np.any(modes):
            modes[rng.integers(chart.real_dim)] = 1
        phase = 2.0 * np.pi * sum(
            int(m) * x / chart.period for m, x in zip(modes, coords, strict=True)
        )
        values = values + rng.normal() * np.cos(phase + rng.uniform(0, 2 * np.pi))
    scale = float(np.max(np.abs(values))) or 1.0
    return amplitude * values / scale


def random_scalar(
    chart: GridChart, rng: np.random.Generator, amplitude: float = 1.0
) -> ScalarField:
    return ScalarField(chart, trig_polynomial(chart, rng, amplitude=amplitude))


def random_metric(
    chart: GridChart, rng: np.random.Generator, amplitude: float = 0.3
) -> MetricField:
    """Identity plus a smooth Hermitian perturbation of sup-norm *amplitude*/n."""
    n = chart.complex_dim
    coeff = np.zeros(chart.shape + (n, n), dtype=complex)
    for i in range(n):
        coeff[..., i, i] = 1.0 + trig_polynomial(chart, rng, amplitude=amplitude / n)
        for j in range(i + 1, n):
            off = trig_polynomial(chart, rng, amplitude=amplitude / (2 * n))
            off = off + 1j * trig_polynomial(chart, rng, amplitude=amplitude / (2 * n))
            coeff[..., i, j] = off
            coeff[..., j, i] = np.conj(off)
    return MetricField.from_form(Form11Field.hermitize(chart, coeff))


def random_vector(
    chart: GridChart, rng: np.random.Generator, amplitude: float = 1.0
) -> VectorField:
    n = chart.complex_dim
    parts = [
        trig_polynomial(chart, rng, amplitude=amplitude)
        + 1j * trig_polynomial(chart, rng, amplitude=amplitude)
        for _ in range(n)
    ]
    return VectorField(chart, np.stack(parts, axis=-1))
