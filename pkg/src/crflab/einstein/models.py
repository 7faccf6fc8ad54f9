"""Kähler-Einstein solution and comparison report models."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from crflab.geometry import MetricField, ScalarField


@dataclass(frozen=True, eq=False)
class KESolution:
    """Potential ``theta`` with ``omega_KE = omega_inf + ddbar theta``."""

    theta: ScalarField
    omega: MetricField
    residual: float
    newton_iters: int
    residual_history: list[float] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "residual": self.residual,
            "newton_iters": self.newton_iters,
            "residual_history": self.residual_history,
        }


@dataclass(frozen=True)
class PinchEntry:
    """Extremes of ``omega_KE^n / (e^{eps psi} Omega)`` for one epsilon."""

    epsilon: float
    sup_ratio: float
    inf_ratio: float

    @property
    def ok(self) -> bool:
        return 0.0 < self.inf_ratio <= self.sup_ratio < float("inf")

    def to_dict(self) -> dict[str, Any]:
        return {
            "epsilon": self.epsilon,
            "sup": self.sup_ratio,
            "inf": self.inf_ratio,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class VolumePinchReport:
    sup_volume_ratio: float
    inf_volume_ratio: float
    entries: list[PinchEntry]

    @property
    def ok(self) -> bool:
        finite = 0.0 < self.inf_volume_ratio <= self.sup_volume_ratio < float("inf")
        return finite and all(e.ok for e in self.entries)

    @property
    def violations(self) -> list[str]:
        found = [] if self.ok else ["volume_pinch"]
        return found + [
            f"volume_pinch[eps={e.epsilon}]" for e in self.entries if not e.ok
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "sup_volume_ratio": self.sup_volume_ratio,
            "inf_volume_ratio": self.inf_volume_ratio,
            "ok": self.ok,
            "entries": [e.to_dict() for e in self.entries],
        }


@dataclass(frozen=True)
class ComparisonEntry:
    """Minimum of ``theta_A - (1 - delta) theta_B - delta eps psi`` and its bound."""

    delta: float
    epsilon: float
    c_eps: float
    min_q: float
    bound: float

    @property
    def margin(self) -> float:
        return self.min_q - self.bound

    @property
    def passed(self) -> bool:
        return self.margin >= -1e-10

    def to_dict(self) -> dict[str, Any]:
        return {
            "delta": self.delta,
            "epsilon": self.epsilon,
            "C_eps": self.c_eps,
            "min_q": self.min_q,
            "bound": self.bound,
            "margin": self.margin,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class UniquenessReport:
    sup_difference: float
    entries: list[ComparisonEntry]

    @property
    def violations(self) -> list[str]:
        return [
            f"uniqueness[delta={e.delta},eps={e.epsilon}]"
            for e in self.entries
            if not e.passed
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "sup_difference": self.sup_difference,
            "entries": [e.to_dict() for e in self.entries],
        }
