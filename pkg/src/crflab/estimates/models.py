"""Result models of the lemma checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from crflab.background import Lemma33Report
from crflab.flow import FlowIdentityReport

EPS_GRID = (0.1, 0.25, 0.5, 1.0)
STABILITY_RTOL = 0.05


@dataclass(frozen=True)
class SeriesStability:
    """Running extreme of a time series and its drift over the final third."""

    value: float
    drift: float
    unbounded: bool = False

    @property
    def stable(self) -> bool:
        return self.drift < STABILITY_RTOL

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "drift": self.drift,
            "stable": self.stable,
            "unbounded": self.unbounded,
        }


@dataclass(frozen=True)
class UpperBoundFit:
    """Constants of ``phi <= C``, ``phidot <= C t e^{-t}``, ``omega^n <= C Omega``."""

    c_phi: SeriesStability
    c_phidot: SeriesStability
    c_vol: SeriesStability
    t1: float

    @property
    def violations(self) -> list[str]:
        series = {"c_phi": self.c_phi, "c_phidot": self.c_phidot, "c_vol": self.c_vol}
        return [f"upper_bound.{name}" for name, s in series.items() if s.unbounded]

    def to_dict(self) -> dict[str, Any]:
        return {
            "t1": self.t1,
            "c_phi": self.c_phi.to_dict(),
            "c_phidot": self.c_phidot.to_dict(),
            "c_vol": self.c_vol.to_dict(),
        }


@dataclass(frozen=True)
class LowerBoundEntry:
    epsilon: float
    inf_q: SeriesStability
    c_eps: float
    implied_phi: float
    implied_phidot: float
    direct_phi: float
    direct_phidot: float

    @property
    def violation(self) -> bool:
        return self.inf_q.unbounded

    def to_dict(self) -> dict[str, Any]:
        return {
            "epsilon": self.epsilon,
            "inf_q": self.inf_q.to_dict(),
            "c_eps": self.c_eps,
            "implied_phi": self.implied_phi,
            "implied_phidot": self.implied_phidot,
            "direct_phi": self.direct_phi,
            "direct_phidot": self.direct_phidot,
            "violation": self.violation,
        }


@dataclass(frozen=True)
class LowerBoundFit:
    """Per-epsilon lower bounds of ``log(omega^n / (e^{eps psi} Omega))``."""

    entries: list[LowerBoundEntry]

    def c_eps(self, epsilon: float) -> float:
        for entry in self.entries:
            if abs(entry.epsilon - epsilon) < 1e-12:
                return entry.c_eps
        raise KeyError(epsilon)

    @property
    def violations(self) -> list[str]:
        return [f"lower_bound[eps={e.epsilon}]" for e in self.entries if e.violation]

    def to_dict(self) -> dict[str, Any]:
        return {"entries": [e.to_dict() for e in self.entries]}


@dataclass(frozen=True)
class Constants:
    """``A`` and ``C0`` of the trace-bound quantity, with their inputs."""

    a: float
    c0_shift: float
    c_evo: float
    s_min: float
    t0: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "A": self.a,
            "C0": self.c0_shift,
            "C_evo": self.c_evo,
            "s_min": self.s_min,
            "T0": self.t0,
        }


@dataclass(frozen=True)
class TraceBoundFit:
    """Fits of ``tr_{omega0} omega <= C' e^{-C psi}`` and the uniform equivalence."""

    q_sup: SeriesStability
    c_exponent: float
    c_prime: float
    c_double_prime: SeriesStability
    regression_slope: float | None
    regression_intercept: float | None
    r_squared: float | None
    a_exponent: float
    exponent_disagreement: bool
    phong_sturm_ok: bool
    gm_am_margin: float
    trace_power_margin: float
    sup_trace: float
    sup_trace_weighted: float

    @property
    def violations(self) -> list[str]:
        found: list[str] = []
        if self.q_sup.unbounded:
            found.append("trace_bound.q_unbounded")
        if not self.phong_sturm_ok:
            found.append("trace_bound.phong_sturm_range")
        if self.gm_am_margin < -1e-8:
            found.append("trace_bound.gm_am")
        if self.trace_power_margin < -1e-8:
            found.append("trace_bound.trace_power")
        return found

    def to_dict(self) -> dict[str, Any]:
        return {
            "q_sup": self.q_sup.to_dict(),
            "C": self.c_exponent,
            "C_prime": self.c_prime,
            "C_double_prime": self.c_double_prime.to_dict(),
            "regression": {
                "slope": self.regression_slope,
                "intercept": self.regression_intercept,
                "r_squared": self.r_squared,
            },
            "A_exponent": self.a_exponent,
            "exponent_disagreement": self.exponent_disagreement,
            "phong_sturm_ok": self.phong_sturm_ok,
            "gm_am_margin": self.gm_am_margin,
            "trace_power_margin": self.trace_power_margin,
            "sup_trace": self.sup_trace,
            "sup_trace_weighted": self.sup_trace_weighted,
        }


@dataclass(frozen=True)
class ResidualSeries:
    """Sup-norm residuals of one identity at a list of times."""

    name: str
    times: list[float]
    residuals: list[float]

    @property
    def max(self) -> float:
        return max(self.residuals, default=0.0)

    def at(self, t: float) -> float | None:
        for time, value in zip(self.times, self.residuals, strict=True):
            if abs(time - t) < 1e-9:
                return value
        return None

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "times": self.times, "residuals": self.residuals}


@dataclass(frozen=True)
class EvolutionReport:
    """Residuals of the parabolic identities; ``centered`` uses snapshot differences."""

    spacing: float | None
    centered: dict[str, ResidualSeries]
    exact: dict[str, ResidualSeries]

    def to_dict(self) -> dict[str, Any]:
        return {
            "spacing": self.spacing,
            "centered": {k: v.to_dict() for k, v in self.centered.items()},
            "exact": {k: v.to_dict() for k, v in self.exact.items()},
        }


@dataclass(frozen=True)
class LogTraceReport:
    """Log-trace evolution: identity residuals, torsion size and ``C_evo``.

    ``bracket_sup`` holds the unmasked sup of each covariant bracket over the
    run; ``torsion_sup`` is its torsion entry.
    """

    centered: ResidualSeries
    exact: ResidualSeries
    torsion_sup: float
    c_evo: float
    assembly_gap: ResidualSeries | None = None
    bracket_sup: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "centered": self.centered.to_dict(),
            "exact": self.exact.to_dict(),
            "torsion_sup": self.torsion_sup,
            "C_evo": self.c_evo,
            "brackets": self.bracket_sup,
        }
        if self.assembly_gap is not None:
            payload["assembly_gap"] = self.assembly_gap.to_dict()
        return payload


@dataclass(frozen=True)
class MonotoneEntry:
    t1: float
    c: float
    max_increase: float
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "t1": self.t1,
            "C": self.c,
            "max_increase": self.max_increase,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class MonotoneReport:
    """``phi + C (1 + t) e^{-t}`` non-increasing after ``t1``, for several ``t1``."""

    entries: list[MonotoneEntry]

    @property
    def violations(self) -> list[str]:
        return [f"monotone[t1={e.t1}]" for e in self.entries if not e.passed]

    def to_dict(self) -> dict[str, Any]:
        return {"entries": [e.to_dict() for e in self.entries]}


@dataclass
class DiagnosticsRecord:
    """Per-snapshot values of every lemma quantity (unmasked reductions)."""

    t: float
    sup_phi: float
    sup_phidot: float
    sup_volume_ratio: float
    inf_q_eps: dict[float, float]
    sup_trace: float
    sup_trace_weighted: float
    q_phong_sturm_sup: float
    s_t_min_eig: float
    einstein_residual: float
    identity_residuals: dict[str, float] = field(default_factory=dict)

    def columns(self) -> list[str]:
        cols = ["t", "sup_phi", "sup_phidot", "sup_volume_ratio"]
        cols += [f"inf_q_eps_{eps:g}" for eps in self.inf_q_eps]
        cols += [
            "sup_trace",
            "sup_trace_weighted",
            "q_phong_sturm_sup",
            "s_t_min_eig",
            "einstein_residual",
        ]
        cols += [f"residual_{name}" for name in self.identity_residuals]
        return cols

    def row(self) -> list[float]:
        values = [self.t, self.sup_phi, self.sup_phidot, self.sup_volume_ratio]
        values += list(self.inf_q_eps.values())
        values += [
            self.sup_trace,
            self.sup_trace_weighted,
            self.q_phong_sturm_sup,
            self.s_t_min_eig,
            self.einstein_residual,
        ]
        values += list(self.identity_residuals.values())
        return values

    def to_dict(self) -> dict[str, Any]:
        return dict(zip(self.columns(), self.row(), strict=True))


@dataclass(frozen=True)
class CheckReport:
    """Every lemma check of one trajectory, with the per-snapshot records."""

    scenario: str
    lemma33: Lemma33Report
    upper: UpperBoundFit
    lower: LowerBoundFit
    monotone: MonotoneReport
    evolution: EvolutionReport
    logtr: LogTraceReport
    constants: Constants
    trace: TraceBoundFit
    flow_identity: FlowIdentityReport
    records: list[DiagnosticsRecord]

    @property
    def violations(self) -> list[str]:
        found: list[str] = []
        if not self.lemma33.passed:
            found.append("lemma33")
        found += self.upper.violations
        found += self.lower.violations
        found += self.monotone.violations
        found += self.trace.violations
        return found

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "violations": self.violations,
            "lemma33": self.lemma33.to_dict(),
            "upper_bounds": self.upper.to_dict(),
            "lower_bounds": self.lower.to_dict(),
            "monotone": self.monotone.to_dict(),
            "constants": self.constants.to_dict(),
            "trace_bound": self.trace.to_dict(),
            "evolution": self.evolution.to_dict(),
            "logtr": self.logtr.to_dict(),
            "flow_identity": self.flow_identity.to_dict(),
        }
