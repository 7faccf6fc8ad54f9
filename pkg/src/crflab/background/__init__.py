"""Fixed geometric inputs of a flow run and their validation."""

from crflab.background.models import BackgroundData, Lemma33Margin, Lemma33Report
from crflab.background.reference import (
    ReferenceFamily,
    current_lower_bound,
    find_T0,
    reference_derivative,
    reference_metric,
    s_current,
    verify_lemma33,
)
from crflab.background.scenarios import (
    assemble_background,
    replace_initial_metric,
    scenario_degenerate,
    scenario_fixed_point,
    scenario_homogeneous,
    scenario_smooth,
    scenario_torsion,
)

__all__ = [
    "BackgroundData",
    "Lemma33Margin",
    "Lemma33Report",
    "ReferenceFamily",
    "assemble_background",
    "current_lower_bound",
    "find_T0",
    "reference_derivative",
    "reference_metric",
    "replace_initial_metric",
    "s_current",
    "scenario_degenerate",
    "scenario_fixed_point",
    "scenario_homogeneous",
    "scenario_smooth",
    "scenario_torsion",
    "verify_lemma33",
]
