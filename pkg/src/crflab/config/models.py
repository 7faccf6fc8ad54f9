"""Run configuration model: one flat namespace of validated keys."""

from __future__ import annotations

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from crflab.estimates import EPS_GRID
from crflab.flow import FlowConfig, Scheme
from crflab.geometry import DifferentiationMode
from crflab.geometry.grid import MIN_RESOLUTION


class ScenarioName(StrEnum):
    smooth = "smooth"
    degenerate = "degenerate"
    homogeneous = "homogeneous"
    fixed_point = "fixed-point"
    torsion = "torsion"
    from_file = "from-file"


_FLOW_KEYS = tuple(FlowConfig.model_fields)


class RunConfig(BaseModel):
    """Every knob of a run. Unknown keys are rejected; ranges are checked here,
    before any grid is allocated."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    # Scenario
    scenario: ScenarioName = ScenarioName.smooth
    background_path: str | None = None
    resolution: int = Field(default=32, ge=MIN_RESOLUTION)
    n: int = Field(default=1, ge=1, le=2)
    mode: DifferentiationMode = DifferentiationMode.spectral
    amplitude: float = Field(default=0.3, ge=0.0, lt=1.0)
    kappa: float = Field(default=0.05, gt=0.0)
    delta: float = Field(default=1e-2, gt=0.0)
    a0: float = Field(default=2.0, gt=0.0)
    a_inf: float = Field(default=1.0, gt=0.0)
    omega_const: float = Field(default=1.0, gt=0.0)

    # Flow
    dt_initial: float = Field(default=1e-3, gt=0)
    dt_max: float = Field(default=0.05, gt=0)
    safety: float = Field(default=0.9, gt=0, lt=1)
    scheme: Scheme = Scheme.rk4
    t_max: float = Field(default=30.0, gt=0)
    convergence_tol: float = Field(default=1e-6, ge=1e-10)
    positivity_floor: float = Field(default=1e-8, gt=0)
    snapshot_every: float = Field(default=0.25, gt=0)
    max_halvings: int = Field(default=20, ge=0)

    # Diagnostics
    diagnostics_stride: int = Field(default=1, ge=1)
    eps_list: list[float] = Field(default_factory=lambda: list(EPS_GRID))
    t1: float = Field(default=1.0, gt=0)
    dump_times: list[float] = Field(default_factory=list)

    # Einstein solver
    ke_tol: float = Field(default=1e-8, gt=0)

    # Output
    output_dir: str = "crf-out"

    # Self-test
    seed: int = Field(default=0, ge=0)

    @field_validator("resolution")
    @classmethod
    def _even_resolution(cls, value: int) -> int:
        if value % 2:
            raise ValueError("resolution must be even")
        return value

    @field_validator("eps_list")
    @classmethod
    def _eps_range(cls, value: list[float]) -> list[float]:
        if not value:
            raise ValueError("eps_list must not be empty")
        for eps in value:
            if not 0.0 < eps <= 1.0:
                raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
        return value

    @model_validator(mode="after")
    def _check_combination(self) -> RunConfig:
        if self.scenario is ScenarioName.from_file and not self.background_path:
            raise ValueError("scenario 'from-file' needs background_path")
        if self.scenario is ScenarioName.torsion and self.n != 2:
            raise ValueError("scenario 'torsion' is defined for n = 2 only")
        if self.dt_initial > self.dt_max:
            raise ValueError("dt_initial must not exceed dt_max")
        return self

    def flow_config(self) -> FlowConfig:
        return FlowConfig(**{key: getattr(self, key) for key in _FLOW_KEYS})
