"""Fast end-to-end example suite at desk resolution."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np

from crflab.background import (
    find_T0,
    scenario_degenerate,
    scenario_fixed_point,
    scenario_homogeneous,
    verify_lemma33,
)
from crflab.einstein import solve_ke, verify_einstein
from crflab.estimates import constants_from
from crflab.flow import FlowConfig, homogeneous_oracle, run
from crflab.geometry import (
    Form11Field,
    GridChart,
    chern_ricci,
    ricci_trace,
    top_power,
    torsion,
)
from crflab.geometry.sampling import random_metric
from crflab.logging import get_logger

_log = get_logger("crflab.selftest")


@dataclass(frozen=True)
class SelfTestResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value)) and self.value <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


Case = Callable[[np.random.Generator], tuple[float, float]]


def _top_power_identity(rng: np.random.Generator) -> tuple[float, float]:
    chart = GridChart(2, 16)
    density = top_power(Form11Field.identity(chart)).density
    return float(np.max(np.abs(density - 2.0))), 1e-12


def _torsion_free_surface(rng: np.random.Generator) -> tuple[float, float]:
    g = random_metric(GridChart(1, 32), rng)
    return torsion(g).sup_norm(), 1e-8


def _ricci_formulas(rng: np.random.Generator) -> tuple[float, float]:
    g = random_metric(GridChart(1, 64), rng)
    return (chern_ricci(g) - ricci_trace(g)).sup_norm(), 1e-6


def _t0_example(rng: np.random.Generator) -> tuple[float, float]:
    bg = scenario_homogeneous(1, 1.0, 10.0, 1.0, c0=9.0)
    return abs(find_T0(bg) - 0.7), 1e-12


def _lemma33_degenerate(rng: np.random.Generator) -> tuple[float, float]:
    report = verify_lemma33(scenario_degenerate(64, 1), [0.1, 0.25, 0.5, 1.0])
    return max(0.0, -min(m.margin for m in report.margins)), 1e-8


def _fixed_point_flow(rng: np.random.Generator) -> tuple[float, float]:
    bg = scenario_fixed_point(1)
    trajectory = run(bg, FlowConfig(t_max=2.0, snapshot_every=0.5))
    return max(s.phi.sup_abs() for s in trajectory.snapshots), 1e-10


def _ode_oracle(rng: np.random.Generator) -> tuple[float, float]:
    bg = scenario_homogeneous(1, 2.0, 1.0, 1.0)
    trajectory = run(bg, FlowConfig(t_max=1.0, dt_max=0.01, snapshot_every=0.5))
    exact = homogeneous_oracle(bg, 1.0)
    return float(np.max(np.abs(trajectory.final.phi.values - exact))), 1e-8


def _ke_homogeneous(rng: np.random.Generator) -> tuple[float, float]:
    bg = scenario_homogeneous(1, 2.0, 3.0, 1.5)
    sol = solve_ke(bg, 1e-10)
    expected = math.log(3.0 / 1.5)
    return float(np.max(np.abs(sol.theta.values - expected))), 1e-10


def _ke_fixed_point(rng: np.random.Generator) -> tuple[float, float]:
    bg = scenario_fixed_point(2)
    return verify_einstein(solve_ke(bg, 1e-12), bg), 1e-10


def _constant_a(rng: np.random.Generator) -> tuple[float, float]:
    return abs(constants_from(3.0, 0.25) - 15.0), 1e-12


CASES: dict[str, Case] = {
    "top_power_identity": _top_power_identity,
    "torsion_free_surface": _torsion_free_surface,
    "ricci_two_formulas": _ricci_formulas,
    "find_t0_example": _t0_example,
    "lemma33_degenerate": _lemma33_degenerate,
    "fixed_point_flow": _fixed_point_flow,
    "ode_oracle": _ode_oracle,
    "ke_homogeneous": _ke_homogeneous,
    "ke_fixed_point": _ke_fixed_point,
    "constant_a": _constant_a,
}


def run_selftest(seed: int = 0) -> list[SelfTestResult]:
    """Run every case with its own generator seeded from *seed*."""
    results: list[SelfTestResult] = []
    for index, (name, case) in enumerate(CASES.items()):
        value, tolerance = case(np.random.default_rng([seed, index]))
        result = SelfTestResult(name, float(value), tolerance)
        _log.debug(
            "selftest.case: name=%s value=%.3e passed=%s", name, value, result.passed
        )
        results.append(result)
    return results
