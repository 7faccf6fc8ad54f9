"""Background data models: the fixed geometric inputs of a flow run."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from crflab.errors import ScenarioError
from crflab.geometry import (
    Form11Field,
    GridChart,
    MetricField,
    ScalarField,
    VolumeFormField,
    ddbar,
    min_eigenvalue,
    top_power,
)

SUP_PSI_TOL = 1e-12
MASS_RTOL = 1e-10
EIGEN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BackgroundData:
    """Initial metric, limit form, volume form and barrier of one scenario.

    Every invariant is checked at construction; an instance that exists is
    valid. ``volume_normalized`` is false only for scenarios that prescribe
    the volume density exactly (the homogeneous family), which are exempt
    from the mass-matching invariant.
    """

    chart: GridChart
    omega0: MetricField
    omega_inf: Form11Field
    volume_form: VolumeFormField
    psi: ScalarField
    pole_mask: np.ndarray
    c0: float
    c_lemma33: float
    psi_delta: float | None = None
    scenario: str = "custom"
    parameters: dict[str, Any] = field(default_factory=dict)
    volume_normalized: bool = True

    def __post_init__(self) -> None:
        mask = np.asarray(self.pole_mask, dtype=bool)
        if mask.shape != self.chart.shape:
            raise ScenarioError(f"pole mask shape {mask.shape} != {self.chart.shape}")
        mask = mask.copy()
        mask.setflags(write=False)
        object.__setattr__(self, "pole_mask", mask)
        if self.c0 <= 0.0:
            raise ScenarioError(f"c0 must be positive, got {self.c0}")
        if self.c_lemma33 <= 0.0:
            raise ScenarioError(f"C_lemma33 must be positive, got {self.c_lemma33}")
        self._validate()

    def _validate(self) -> None:
        sup_psi = self.psi.sup(self.pole_mask)
        if abs(sup_psi) > SUP_PSI_TOL:
            raise ScenarioError(f"sup psi over unmasked points is {sup_psi:.3e}, not 0")

        if min_eigenvalue(self.omega_inf, self.omega0).inf() < -EIGEN_TOL:
            raise ScenarioError("omega_inf is not semi-positive")

        current = min_eigenvalue(self.omega_inf + self.ddbar_psi, self.omega0)
        margin = current.inf(self.pole_mask) - self.c0
        if margin < -EIGEN_TOL * max(self.c0, 1.0):
            raise ScenarioError(
                f"omega_inf + ddbar psi >= c0 omega0 fails by {-margin:.3e}"
            )

        lower = min_eigenvalue(self.ddbar_psi, self.omega0).inf(self.pole_mask)
        if lower < -self.c_lemma33 * (1.0 + EIGEN_TOL):
            raise ScenarioError(
                f"ddbar psi >= -C omega0 fails: min eigenvalue {lower:.3e}, "
                f"C = {self.c_lemma33:.3e}"
            )

        if self.volume_normalized:
            target = top_power(self.omega0).total_mass
            mass = self.volume_form.total_mass
            if abs(mass - target) > MASS_RTOL * target:
                raise ScenarioError(
                    f"volume form mass {mass!r} does not match omega0^n mass {target!r}"
                )

    @cached_property
    def ddbar_psi(self) -> Form11Field:
        return ddbar(self.psi)

    @property
    def unmasked(self) -> np.ndarray:
        return ~self.pole_mask

    @property
    def has_pole(self) -> bool:
        return self.psi_delta is not None

    @property
    def complex_dim(self) -> int:
        return self.chart.complex_dim

    def describe(self) -> dict[str, Any]:
        """Scalar metadata for summaries and field-dump headers."""
        return {
            "scenario": self.scenario,
            "complex_dim": self.chart.complex_dim,
            "resolution": self.chart.resolution,
            "mode": str(self.chart.mode),
            "c0": self.c0,
            "c_lemma33": self.c_lemma33,
            "psi_delta": self.psi_delta,
            "volume_normalized": self.volume_normalized,
            "parameters": dict(self.parameters),
        }


@dataclass(frozen=True)
class Lemma33Margin:
    epsilon: float
    margin: float
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {"epsilon": self.epsilon, "margin": self.margin, "passed": self.passed}


@dataclass(frozen=True)
class Lemma33Report:
    """Per-epsilon margins of ``omega_inf + eps ddbar psi >= eps c0 omega0``."""

    c0: float
    c_lemma33: float
    margins: list[Lemma33Margin]

    @property
    def passed(self) -> bool:
        return all(m.passed for m in self.margins)

    def to_dict(self) -> dict[str, Any]:
        return {
            "c0": self.c0,
            "c_lemma33": self.c_lemma33,
            "passed": self.passed,
            "margins": [m.to_dict() for m in self.margins],
        }
