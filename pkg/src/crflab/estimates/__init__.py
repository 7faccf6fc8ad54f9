"""Empirical checks of the a priori estimates along a flow trajectory."""

from crflab.estimates.bounds import (
    check_lower_bounds,
    check_monotone,
    check_upper_bounds,
    monotone_quantity,
)
from crflab.estimates.evolution import (
    LogTraceAssembly,
    check_evolution_identities,
    check_logtr_evolution,
    phi_tilde_shift,
)
from crflab.estimates.models import (
    EPS_GRID,
    CheckReport,
    Constants,
    DiagnosticsRecord,
    EvolutionReport,
    LogTraceReport,
    LowerBoundFit,
    MonotoneReport,
    ResidualSeries,
    SeriesStability,
    TraceBoundFit,
    UpperBoundFit,
)
from crflab.estimates.records import build_records
from crflab.estimates.series import stability
from crflab.estimates.suite import run_checks
from crflab.estimates.trace import check_trace_bound, choose_constants, constants_from

__all__ = [
    "EPS_GRID",
    "CheckReport",
    "Constants",
    "DiagnosticsRecord",
    "EvolutionReport",
    "LogTraceAssembly",
    "LogTraceReport",
    "LowerBoundFit",
    "MonotoneReport",
    "ResidualSeries",
    "SeriesStability",
    "TraceBoundFit",
    "UpperBoundFit",
    "build_records",
    "check_evolution_identities",
    "check_logtr_evolution",
    "check_lower_bounds",
    "check_monotone",
    "check_trace_bound",
    "check_upper_bounds",
    "choose_constants",
    "constants_from",
    "monotone_quantity",
    "phi_tilde_shift",
    "run_checks",
    "stability",
]
