"""Tests for GridChart: validation, derivatives, Fourier helpers."""

from __future__ import annotations

import numpy as np
import pytest

from crflab.errors import ConfigError
from crflab.geometry import DifferentiationMode, GridChart

TWO_PI = 2.0 * np.pi


class TestValidation:
    @pytest.mark.parametrize(
        ("n", "resolution"), [(3, 16), (0, 16), (1, 15), (1, 8), (2, 17)]
    )
    def test_rejects_bad_shape(self, n: int, resolution: int) -> None:
        with pytest.raises(ConfigError):
            GridChart(n, resolution)

    def test_rejects_non_positive_period(self) -> None:
        with pytest.raises(ConfigError):
            GridChart(1, 16, period=0.0)

    def test_lattice_metadata(self) -> None:
        chart = GridChart(2, 16)
        assert chart.real_dim == 4
        assert chart.shape == (16, 16, 16, 16)
        assert chart.spacing == pytest.approx(1 / 16)
        assert len(chart.coordinates()) == 4


class TestDerivatives:
    def test_spectral_is_exact_on_resolved_modes(self) -> None:
        chart = GridChart(1, 32)
        x, y = chart.coordinates()
        values = np.sin(TWO_PI * x) * np.cos(2 * TWO_PI * y)
        expected = TWO_PI * np.cos(TWO_PI * x) * np.cos(2 * TWO_PI * y)
        assert np.max(np.abs(chart.derivative(values, 0) - expected)) < 1e-10

    def test_fd4_converges_at_fourth_order(self) -> None:
        errors = []
        for resolution in (32, 64):
            chart = GridChart(1, resolution, mode=DifferentiationMode.fd4)
            x, _ = chart.coordinates()
            approx = chart.derivative(np.sin(TWO_PI * x), 0)
            errors.append(np.max(np.abs(approx - TWO_PI * np.cos(TWO_PI * x))))
        assert errors[0] / errors[1] > 14.0

    def test_holomorphic_split(self) -> None:
        chart = GridChart(1, 16)
        x, y = chart.coordinates()
        f = np.sin(TWO_PI * y)
        expected = np.pi * np.cos(TWO_PI * y)
        np.testing.assert_allclose(chart.dz(f, 0), -1j * expected, atol=1e-12)
        np.testing.assert_allclose(chart.dzbar(f, 0), 1j * expected, atol=1e-12)

    def test_complex_input_keeps_imaginary_part(self) -> None:
        chart = GridChart(1, 16)
        x, _ = chart.coordinates()
        wave = np.exp(1j * TWO_PI * x)
        np.testing.assert_allclose(
            chart.derivative(wave, 0), 1j * TWO_PI * wave, atol=1e-10
        )


class TestFourierHelpers:
    def test_ddbar_trace_symbol_is_quarter_laplacian(self) -> None:
        chart = GridChart(1, 16)
        x, _ = chart.coordinates()
        f = np.sin(TWO_PI * x)
        out = chart.apply_symbol(f, chart.ddbar_trace_symbol())
        np.testing.assert_allclose(out, -(np.pi**2) * f, atol=1e-10)

    def test_lowpass_keeps_low_modes(self) -> None:
        chart = GridChart(1, 32)
        x, y = chart.coordinates()
        f = np.cos(TWO_PI * x) + np.sin(TWO_PI * y)
        assert np.max(np.abs(chart.lowpass(f) - f)) < 1e-7

    def test_lowpass_damps_top_modes(self) -> None:
        chart = GridChart(1, 32)
        x, _ = chart.coordinates()
        f = np.cos(15 * TWO_PI * x)
        assert np.max(np.abs(chart.lowpass(f))) < 1e-3

    def test_cell_distance_is_periodic(self) -> None:
        chart = GridChart(1, 16)
        distance = chart.cell_distance((0, 0))
        assert distance[0, 0] == 0.0
        assert distance[15, 0] == pytest.approx(1.0)
        assert distance[8, 8] == pytest.approx(np.sqrt(128.0))

    def test_cell_distance_ignores_second_plane(self) -> None:
        chart = GridChart(2, 16)
        distance = chart.cell_distance((0, 0))
        assert distance[1, 1, 5, 7] == pytest.approx(np.sqrt(2.0))
