"""Flow configuration, live state and trajectory models."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import StrEnum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from crflab.background import BackgroundData
from crflab.geometry import MetricField, ScalarField


class Scheme(StrEnum):
    """Time-stepping scheme."""

    rk4 = "rk4"
    imex = "imex"


class FlowConfig(BaseModel):
    """Time-stepping controls for one flow run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dt_initial: float = Field(default=1e-3, gt=0)
    dt_max: float = Field(default=0.05, gt=0)
    safety: float = Field(default=0.9, gt=0, lt=1)
    scheme: Scheme = Scheme.rk4
    t_max: float = Field(default=30.0, gt=0)
    convergence_tol: float = Field(default=1e-6, ge=1e-10)
    positivity_floor: float = Field(default=1e-8, gt=0)
    snapshot_every: float = Field(default=0.25, gt=0)
    max_halvings: int = Field(default=20, ge=0)

    @model_validator(mode="after")
    def _check_steps(self) -> FlowConfig:
        if self.dt_initial > self.dt_max:
            raise ValueError("dt_initial must not exceed dt_max")
        return self


@dataclass(frozen=True, eq=False)
class FlowState:
    """Potential at time ``t`` with the cached time derivative and metric."""

    t: float
    phi: ScalarField
    phidot: ScalarField
    omega: MetricField
    step_count: int = 0
    rejected_steps: int = 0
    dt_last: float | None = None

    def snapshot(self) -> Snapshot:
        return Snapshot(self.t, self.phi, self.phidot, self.step_count)


@dataclass(frozen=True, eq=False)
class Snapshot:
    """Stored trajectory sample; the metric is rebuilt on demand."""

    t: float
    phi: ScalarField
    phidot: ScalarField
    step_count: int = 0


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Snapshots of one flow run over a fixed background."""

    background: BackgroundData
    config: FlowConfig
    snapshots: list[Snapshot]
    converged: bool = False
    steps_taken: int = 0
    rejected_steps: int = 0
    metadata: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.snapshots)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]

    def final_sup_phidot(self) -> float:
        return self.final.phidot.sup_abs(self.background.pole_mask)

    def with_snapshots(self, snapshots: list[Snapshot]) -> Trajectory:
        return replace(self, snapshots=snapshots)


@dataclass(frozen=True, eq=False)
class LimitPotential:
    """Final potential of a run with its limit metric."""

    phi: ScalarField
    omega: MetricField
    sup_phidot: float
    t: float
    converged: bool
