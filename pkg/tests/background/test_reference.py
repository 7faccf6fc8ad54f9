"""Tests for the reference family, the current family and T0."""

from __future__ import annotations

import math

import numpy as np
import pytest

from crflab.background import (
    BackgroundData,
    ReferenceFamily,
    current_lower_bound,
    find_T0,
    reference_derivative,
    reference_metric,
    s_current,
    scenario_homogeneous,
    scenario_smooth,
    verify_lemma33,
)
from crflab.errors import ConfigError


class TestReferenceMetric:
    def test_starts_at_initial_metric(self) -> None:
        bg = scenario_smooth(16, 1)
        np.testing.assert_array_equal(reference_metric(bg, 0.0).coeff, bg.omega0.coeff)

    def test_negative_time_rejected(self, homogeneous_bg: BackgroundData) -> None:
        with pytest.raises(ConfigError):
            reference_metric(homogeneous_bg, -0.1)

    def test_homogeneous_closed_form(self, homogeneous_bg: BackgroundData) -> None:
        t = 0.7
        expected = 2.0 * math.exp(-t) + (1.0 - math.exp(-t))
        coeff = reference_metric(homogeneous_bg, t).coeff
        np.testing.assert_allclose(coeff[..., 0, 0].real, expected, rtol=1e-14)

    def test_approaches_limit_form(self) -> None:
        bg = scenario_smooth(16, 1)
        late = reference_metric(bg, 40.0).coeff
        np.testing.assert_allclose(late, bg.omega_inf.coeff, atol=1e-15)

    @pytest.mark.parametrize("t", [0.3, 1.0, 4.0])
    def test_derivative_matches_difference_quotient(self, t: float) -> None:
        bg = scenario_smooth(16, 1)
        h = 1e-4
        quotient = (
            reference_metric(bg, t + h).coeff - reference_metric(bg, t - h).coeff
        ) / (2.0 * h)
        np.testing.assert_allclose(
            reference_derivative(bg, t).coeff, quotient, atol=1e-7
        )

    def test_family_view(self, homogeneous_bg: BackgroundData) -> None:
        family = ReferenceFamily(homogeneous_bg)
        np.testing.assert_array_equal(
            family(1.0).coeff, reference_metric(homogeneous_bg, 1.0).coeff
        )
        np.testing.assert_array_equal(
            family.current(1.0).coeff, s_current(homogeneous_bg, 1.0).coeff
        )


class TestCurrent:
    def test_lower_bound_decreases_towards_limit(
        self, homogeneous_bg: BackgroundData
    ) -> None:
        # S_t = (1 + e^{-t}) Id against omega0 = 2 Id
        bounds = current_lower_bound(homogeneous_bg, [0.0, 1.0, 20.0])
        assert bounds[0.0] == pytest.approx(1.0)
        assert bounds[1.0] == pytest.approx(0.5 * (1.0 + math.exp(-1.0)))
        assert bounds[20.0] == pytest.approx(0.5, abs=1e-8)

    def test_degenerate_current_stays_above_c0(
        self, degenerate_bg: BackgroundData
    ) -> None:
        t0 = find_T0(degenerate_bg)
        bounds = current_lower_bound(degenerate_bg, [t0, t0 + 1.0, t0 + 5.0])
        assert all(value >= 0.5 * degenerate_bg.c0 for value in bounds.values())


class TestFindT0:
    def test_zero_when_initial_metric_dominates(
        self, homogeneous_bg: BackgroundData
    ) -> None:
        assert find_T0(homogeneous_bg) == 0.0

    def test_first_grid_time_after_threshold(self) -> None:
        # deficit -9, c0 = 9: need e^{-t} <= 1/2
        bg = scenario_homogeneous(1, 1.0, 10.0, 1.0, c0=9.0)
        assert find_T0(bg) == pytest.approx(0.7)

    def test_larger_deficit_waits_longer(self) -> None:
        near = scenario_homogeneous(1, 1.0, 10.0, 1.0, c0=9.0)
        far = scenario_homogeneous(1, 1.0, 20.0, 1.0, c0=9.0)
        assert find_T0(far) > find_T0(near)
        assert find_T0(far) == pytest.approx(1.5)


class TestVerifyLemma33:
    def test_homogeneous_margins(self, homogeneous_bg: BackgroundData) -> None:
        report = verify_lemma33(homogeneous_bg, [0.25, 1.0])
        assert report.passed
        margins = [m.margin for m in report.margins]
        assert margins == pytest.approx([1.0 - 0.25 * 0.45, 1.0 - 0.45])

    def test_degenerate_passes_on_unmasked_points(
        self, degenerate_bg: BackgroundData
    ) -> None:
        report = verify_lemma33(degenerate_bg, [0.1, 0.5, 1.0])
        assert report.passed
        assert report.to_dict()["c_lemma33"] == degenerate_bg.c_lemma33

    @pytest.mark.parametrize("eps", [0.0, -0.5, 1.5])
    def test_epsilon_out_of_range(
        self, homogeneous_bg: BackgroundData, eps: float
    ) -> None:
        with pytest.raises(ConfigError):
            verify_lemma33(homogeneous_bg, [eps])
