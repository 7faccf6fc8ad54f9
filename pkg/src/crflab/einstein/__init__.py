"""Kähler-Einstein fixed point of the normalized flow."""

from crflab.einstein.models import (
    ComparisonEntry,
    KESolution,
    PinchEntry,
    UniquenessReport,
    VolumePinchReport,
)
from crflab.einstein.solver import from_potential, ke_metric, ke_residual, solve_ke
from crflab.einstein.verify import (
    compare_uniqueness,
    verify_einstein,
    verify_volume_pinch,
)

__all__ = [
    "ComparisonEntry",
    "KESolution",
    "PinchEntry",
    "UniquenessReport",
    "VolumePinchReport",
    "compare_uniqueness",
    "from_potential",
    "ke_metric",
    "ke_residual",
    "solve_ke",
    "verify_einstein",
    "verify_volume_pinch",
]
