"""Chern-connection calculus on grid fields.

Index conventions (all arrays keep spatial axes first):

- ``Form11Field.coeff[..., i, j]`` is ``alpha_{i jbar}``.
- ``MetricField.inverse[..., l, k]`` is ``g^{lbar k}``.
- ``ChristoffelField.coeff[..., k, i, j]`` is ``Gamma^k_{ij}``.
- ``CurvatureField.coeff[..., k, l, i, p]`` is ``R_{k lbar i}^p``.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from crflab.errors import DegenerateMetricError, FieldError
from crflab.geometry.fields import (
    ChristoffelField,
    CurvatureField,
    Form11Field,
    MetricField,
    ScalarField,
    TorsionField,
    VectorField,
    VolumeFormField,
    hermitian_part,
)
from crflab.geometry.grid import GridChart

MAX_CONDITION = 1e12


# ---------------------------------------------------------------------------
# Raw-array kernels
# ---------------------------------------------------------------------------


def dz_tensor(chart: GridChart, coeff: np.ndarray) -> np.ndarray:
    """``out[..., i, *components] = d_i coeff[..., *components]``.

    Spatial derivatives act on the leading axes only, so trailing component
    axes ride along in the same transform.
    """
    return np.stack(
        [chart.dz(coeff, i) for i in range(chart.complex_dim)], axis=chart.real_dim
    )


def dzbar_tensor(chart: GridChart, coeff: np.ndarray) -> np.ndarray:
    """``out[..., i, *components] = dbar_i coeff[..., *components]``."""
    return np.stack(
        [chart.dzbar(coeff, i) for i in range(chart.complex_dim)], axis=chart.real_dim
    )


def ddbar_tensor(chart: GridChart, coeff: np.ndarray) -> np.ndarray:
    """``out[..., k, l, *components] = d_k dbar_l coeff[..., *components]``."""
    return dz_tensor(chart, dzbar_tensor(chart, coeff))


def ddbar_array(chart: GridChart, values: np.ndarray) -> np.ndarray:
    """``out[..., k, l] = d^2 values / dz_k dzbar_l`` for a scalar sample array."""
    return ddbar_tensor(chart, values)


def trace_array(inverse: np.ndarray, coeff: np.ndarray) -> np.ndarray:
    """``g^{jbar i} alpha_{i jbar}`` given ``inverse[..., j, i] = g^{jbar i}``."""
    return np.einsum("...ji,...ij->...", inverse, coeff).real


# ---------------------------------------------------------------------------
# Field operations
# ---------------------------------------------------------------------------


def ddbar(f: ScalarField) -> Form11Field:
    """Mixed complex Hessian ``d^2 f / dz_k dzbar_l`` as a Hermitian form."""
    if not np.all(np.isfinite(f.values)):
        raise FieldError("ddbar requires finite samples")
    return Form11Field.hermitize(f.chart, ddbar_array(f.chart, f.real_values))


def _checked_inverse(g: MetricField) -> np.ndarray:
    cond = g.condition_number()
    if np.max(cond) > MAX_CONDITION:
        raise DegenerateMetricError(
            f"metric condition number {float(np.max(cond)):.3e} "
            f"exceeds {MAX_CONDITION:.0e}"
        )
    return g.inverse


def christoffels(g: MetricField) -> ChristoffelField:
    """``Gamma^k_{ij} = g^{lbar k} d_i g_{j lbar}``."""
    inverse = _checked_inverse(g)
    dg = dz_tensor(g.chart, g.coeff)  # [..., i, j, l]
    return ChristoffelField(g.chart, np.einsum("...lk,...ijl->...kij", inverse, dg))


def torsion(g: MetricField) -> TorsionField:
    gamma = christoffels(g).coeff
    return TorsionField(g.chart, gamma - np.swapaxes(gamma, -1, -2))


def chern_curvature(g: MetricField) -> CurvatureField:
    """``R_{k lbar i}^p = -dbar_l Gamma^p_{ki}``."""
    gamma = christoffels(g).coeff  # [..., p, k, i]
    dbar = dzbar_tensor(g.chart, gamma)  # [..., l, p, k, i]
    nd = g.chart.real_dim
    source = [nd, nd + 1, nd + 2, nd + 3]
    coeff = -np.moveaxis(dbar, source, [nd + 1, nd + 3, nd, nd + 2])
    return CurvatureField(g.chart, coeff)


def chern_ricci(g: MetricField) -> Form11Field:
    """``R_{k lbar} = -d_k dbar_l log det g``."""
    return -ddbar(ScalarField(g.chart, g.log_det))


def ricci_trace(g: MetricField) -> Form11Field:
    """Chern-Ricci form from the curvature trace ``g^{jbar i} R_{k lbar i jbar}``."""
    return chern_curvature(g).ricci()


def trace(base: MetricField, alpha: Form11Field) -> ScalarField:
    """``tr_base alpha``, real for Hermitian alpha."""
    return ScalarField(base.chart, trace_array(base.inverse, alpha.coeff))


def top_power_density(alpha: Form11Field) -> np.ndarray:
    """Unchecked ``n! det alpha`` (may be non-positive)."""
    n = alpha.chart.complex_dim
    return factorial(n) * np.linalg.det(alpha.coeff).real


def top_power(alpha: Form11Field) -> VolumeFormField:
    """``alpha^n`` as a density against the Euclidean element; identity gives ``n!``."""
    return VolumeFormField(alpha.chart, top_power_density(alpha))


def laplacian(g: MetricField, f: ScalarField) -> ScalarField:
    """Chern Laplacian ``g^{jbar i} d_i dbar_j f``."""
    return trace(g, ddbar(f))


def generalized_eigenvalues(alpha: Form11Field, base: MetricField) -> np.ndarray:
    """Ascending eigenvalues of ``alpha`` relative to ``base`` at every point."""
    lower = np.linalg.cholesky(base.coeff)
    lower_inv = np.linalg.inv(lower)
    reduced = lower_inv @ alpha.coeff @ np.conj(np.swapaxes(lower_inv, -1, -2))
    return np.linalg.eigvalsh(hermitian_part(reduced))


def min_eigenvalue(alpha: Form11Field, base: MetricField) -> ScalarField:
    return ScalarField(alpha.chart, generalized_eigenvalues(alpha, base)[..., 0])


def max_eigenvalue(alpha: Form11Field, base: MetricField) -> ScalarField:
    return ScalarField(alpha.chart, generalized_eigenvalues(alpha, base)[..., -1])


# ---------------------------------------------------------------------------
# Commutation identity
# ---------------------------------------------------------------------------


def commutator(g: MetricField, x: VectorField) -> np.ndarray:
    """``[nabla_k, nabla_lbar] X^i`` from derivatives, layout ``[..., k, l, i]``.

    ``nabla_lbar X^i = dbar_l X^i`` and ``nabla_k X^i = d_k X^i + Gamma^i_{kj} X^j``.
    """
    chart = g.chart
    gamma = christoffels(g).coeff  # [..., i, k, j]
    dbar_x = dzbar_tensor(chart, x.coeff)  # [..., l, i]
    transport = np.einsum("...ikj,...j->...ki", gamma, x.coeff)
    nabla_k = dz_tensor(chart, x.coeff) + transport
    # nabla_k (nabla_lbar X)^i
    first = dz_tensor(chart, dbar_x) + np.einsum(
        "...ikj,...lj->...kli", gamma, dbar_x
    )
    # nabla_lbar (nabla_k X)^i
    second = np.swapaxes(dzbar_tensor(chart, nabla_k), -3, -2)
    return first - second


def curvature_action(curvature: CurvatureField, x: VectorField) -> np.ndarray:
    """``R_{k lbar j}^i X^j``, layout ``[..., k, l, i]``."""
    return np.einsum("...klji,...j->...kli", curvature.coeff, x.coeff)
