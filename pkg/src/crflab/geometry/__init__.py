"""Discrete complex differential geometry on periodic grids."""

from crflab.geometry.fields import (
    ChristoffelField,
    CurvatureField,
    Form11Field,
    MetricField,
    ScalarField,
    TorsionField,
    VectorField,
    VolumeFormField,
    flat_volume,
)
from crflab.geometry.grid import DifferentiationMode, GridChart
from crflab.geometry.operators import (
    chern_curvature,
    chern_ricci,
    christoffels,
    commutator,
    curvature_action,
    ddbar,
    generalized_eigenvalues,
    laplacian,
    max_eigenvalue,
    min_eigenvalue,
    ricci_trace,
    top_power,
    torsion,
    trace,
)

__all__ = [
    "ChristoffelField",
    "CurvatureField",
    "DifferentiationMode",
    "Form11Field",
    "GridChart",
    "MetricField",
    "ScalarField",
    "TorsionField",
    "VectorField",
    "VolumeFormField",
    "chern_curvature",
    "chern_ricci",
    "christoffels",
    "commutator",
    "curvature_action",
    "ddbar",
    "flat_volume",
    "generalized_eigenvalues",
    "laplacian",
    "max_eigenvalue",
    "min_eigenvalue",
    "ricci_trace",
    "top_power",
    "torsion",
    "trace",
]
