"""Grid-sampled fields: scalars, (1,1)-forms, metrics, tensors, volume forms.

Every field is an immutable snapshot: constructors copy the sample array and
mark it read-only, and arithmetic returns fresh fields.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial

import numpy as np

from crflab.errors import (
    DegenerateMetricError,
    FieldError,
    HermiticityError,
    NonFiniteFieldError,
    PositivityLossError,
)
from crflab.geometry.grid import GridChart

HERMITIAN_RTOL = 1e-12

Mask = np.ndarray | None


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, copy=True)
    array.setflags(write=False)
    return array


def _check_shape(chart: GridChart, values: np.ndarray, tail: tuple[int, ...]) -> None:
    expected = chart.shape + tail
    if values.shape != expected:
        raise FieldError(f"field shape {values.shape} does not match {expected}")


def _check_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        bad = int(np.count_nonzero(~np.isfinite(values)))
        raise NonFiniteFieldError(f"{what} has {bad} non-finite samples")


def select(values: np.ndarray, mask: Mask) -> np.ndarray:
    """Samples of *values* at points outside *mask*."""
    if mask is None:
        return values
    if not np.any(~mask):
        raise FieldError("mask excludes every grid point")
    return values[~mask]


def hermitian_part(coeff: np.ndarray) -> np.ndarray:
    return 0.5 * (coeff + np.conj(np.swapaxes(coeff, -1, -2)))


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A real or complex sample per grid point."""

    chart: GridChart
    values: np.ndarray
    regularized: bool = False

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        _check_shape(self.chart, values, ())
        if not self.regularized:
            _check_finite(values, "scalar field")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def constant(cls, chart: GridChart, value: float) -> ScalarField:
        return cls(chart, np.full(chart.shape, float(value)))

    @property
    def real_values(self) -> np.ndarray:
        """Real samples; complex fields must have a negligible imaginary part."""
        if np.isrealobj(self.values):
            return self.values
        scale = max(float(np.max(np.abs(self.values))), 1.0)
        if float(np.max(np.abs(self.values.imag))) > 1e-9 * scale:
            raise FieldError("expected a real-valued scalar field")
        return self.values.real

    def sup(self, mask: Mask = None) -> float:
        return float(np.max(select(self.real_values, mask)))

    def inf(self, mask: Mask = None) -> float:
        return float(np.min(select(self.real_values, mask)))

    def sup_abs(self, mask: Mask = None) -> float:
        return float(np.max(np.abs(select(self.values, mask))))

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> ScalarField:
        return ScalarField(self.chart, fn(self.values))

    def _other(self, other: ScalarField | float) -> np.ndarray | float:
        if isinstance(other, ScalarField):
            return other.values
        return other

    def __add__(self, other: ScalarField | float) -> ScalarField:
        return ScalarField(self.chart, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other: ScalarField | float) -> ScalarField:
        return ScalarField(self.chart, self.values - self._other(other))

    def __rsub__(self, other: float) -> ScalarField:
        return ScalarField(self.chart, other - self.values)

    def __mul__(self, other: ScalarField | float) -> ScalarField:
        return ScalarField(self.chart, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarField | float) -> ScalarField:
        return ScalarField(self.chart, self.values / self._other(other))

    def __neg__(self) -> ScalarField:
        return ScalarField(self.chart, -self.values)


# ---------------------------------------------------------------------------
# (1,1)-forms and metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Form11Field:
    """Coefficients ``alpha_{i jbar}`` of a real (1,1)-form, one matrix per point."""

    chart: GridChart
    coeff: np.ndarray

    def __post_init__(self) -> None:
        n = self.chart.complex_dim
        coeff = np.asarray(self.coeff, dtype=complex)
        _check_shape(self.chart, coeff, (n, n))
        _check_finite(coeff, "(1,1)-form")
        skew = np.max(np.abs(coeff - np.conj(np.swapaxes(coeff, -1, -2))))
        scale = np.max(np.abs(coeff))
        if skew > HERMITIAN_RTOL * max(scale, 1e-300):
            raise HermiticityError(
                f"coefficient matrices not Hermitian: skew={skew:.3e}"
            )
        object.__setattr__(self, "coeff", _frozen(coeff))

    @classmethod
    def hermitize(cls, chart: GridChart, coeff: np.ndarray) -> Form11Field:
        """Build a form from the Hermitian part of *coeff*."""
        return cls(chart, hermitian_part(np.asarray(coeff, dtype=complex)))

    @classmethod
    def identity(cls, chart: GridChart, scale: float = 1.0) -> Form11Field:
        n = chart.complex_dim
        coeff = np.broadcast_to(scale * np.eye(n, dtype=complex), chart.shape + (n, n))
        return cls(chart, coeff)

    @classmethod
    def conformal(cls, factor: ScalarField) -> Form11Field:
        """``factor * Id`` pointwise."""
        n = factor.chart.complex_dim
        coeff = factor.real_values[..., None, None] * np.eye(n)
        return cls(factor.chart, coeff)

    @classmethod
    def diagonal(cls, chart: GridChart, entries: list[np.ndarray]) -> Form11Field:
        n = chart.complex_dim
        coeff = np.zeros(chart.shape + (n, n), dtype=complex)
        for i, entry in enumerate(entries):
            coeff[..., i, i] = entry
        return cls(chart, coeff)

    def sup_norm(self, mask: Mask = None) -> float:
        """Largest coefficient modulus over unmasked points."""
        return float(np.max(np.abs(select(self.coeff, mask))))

    def as_form(self) -> Form11Field:
        return Form11Field(self.chart, self.coeff)

    def _other(self, other: Form11Field) -> np.ndarray:
        return other.coeff

    def __add__(self, other: Form11Field) -> Form11Field:
        return Form11Field(self.chart, self.coeff + self._other(other))

    def __sub__(self, other: Form11Field) -> Form11Field:
        return Form11Field(self.chart, self.coeff - self._other(other))

    def __neg__(self) -> Form11Field:
        return Form11Field(self.chart, -self.coeff)

    def __mul__(self, factor: float | ScalarField) -> Form11Field:
        if isinstance(factor, ScalarField):
            scale = factor.real_values[..., None, None]
            return Form11Field(self.chart, self.coeff * scale)
        return Form11Field(self.chart, self.coeff * float(factor))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class MetricField(Form11Field):
    """A Hermitian metric ``g_{i jbar}``: positive definite at every point."""

    def __post_init__(self) -> None:
        super().__post_init__()
        eigen = np.linalg.eigvalsh(self.coeff)[..., 0]
        worst = np.unravel_index(int(np.argmin(eigen)), eigen.shape)
        if eigen[worst] <= 0.0:
            raise PositivityLossError(
                f"metric not positive definite at {tuple(map(int, worst))}: "
                f"eigenvalue {float(eigen[worst]):.3e}",
                index=tuple(int(i) for i in worst),
                eigenvalue=float(eigen[worst]),
            )

    @classmethod
    def from_form(cls, form: Form11Field) -> MetricField:
        return cls(form.chart, form.coeff)

    @cached_property
    def inverse(self) -> np.ndarray:
        """``inverse[..., l, k] = g^{lbar k}``."""
        return np.linalg.inv(self.coeff)

    @cached_property
    def log_det(self) -> np.ndarray:
        sign, logdet = np.linalg.slogdet(self.coeff)
        if np.any(np.real(sign) <= 0.0):
            raise DegenerateMetricError("metric determinant is not positive")
        return logdet

    def condition_number(self) -> np.ndarray:
        return np.linalg.cond(self.coeff)


# ---------------------------------------------------------------------------
# Tensors
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChristoffelField:
    """Chern connection symbols, ``coeff[..., k, i, j] = Gamma^k_{ij}``."""

    chart: GridChart
    coeff: np.ndarray

    def __post_init__(self) -> None:
        n = self.chart.complex_dim
        _check_shape(self.chart, self.coeff, (n, n, n))
        object.__setattr__(self, "coeff", _frozen(self.coeff))


@dataclass(frozen=True, eq=False)
class TorsionField:
    """Torsion ``coeff[..., k, i, j] = T^k_{ij}``, antisymmetric in ``i, j``."""

    chart: GridChart
    coeff: np.ndarray

    def __post_init__(self) -> None:
        n = self.chart.complex_dim
        _check_shape(self.chart, self.coeff, (n, n, n))
        sym = np.max(np.abs(self.coeff + np.swapaxes(self.coeff, -1, -2)), initial=0.0)
        if sym > 1e-10 * max(float(np.max(np.abs(self.coeff), initial=0.0)), 1.0):
            raise FieldError(f"torsion is not antisymmetric: {sym:.3e}")
        object.__setattr__(self, "coeff", _frozen(self.coeff))

    def sup_norm(self, mask: Mask = None) -> float:
        return float(np.max(np.abs(select(self.coeff, mask)), initial=0.0))

    def trace(self) -> np.ndarray:
        """``T^p_{kp}`` as an array indexed by ``k``."""
        return np.einsum("...pkp->...k", self.coeff)


@dataclass(frozen=True, eq=False)
class CurvatureField:
    """Chern curvature ``coeff[..., k, l, i, p] = R_{k lbar i}^p``."""

    chart: GridChart
    coeff: np.ndarray

    def __post_init__(self) -> None:
        n = self.chart.complex_dim
        _check_shape(self.chart, self.coeff, (n, n, n, n))
        object.__setattr__(self, "coeff", _frozen(self.coeff))

    def lowered(self, g: MetricField) -> np.ndarray:
        """``R_{k lbar i jbar} = R_{k lbar i}^p g_{p jbar}``."""
        return np.einsum("...klip,...pj->...klij", self.coeff, g.coeff)

    def ricci(self) -> Form11Field:
        """Chern-Ricci form as the trace ``R_{k lbar i}^i``."""
        traced = np.einsum("...klii->...kl", self.coeff)
        return Form11Field.hermitize(self.chart, traced)


@dataclass(frozen=True, eq=False)
class VectorField:
    """A (1,0) vector field ``X^i``."""

    chart: GridChart
    coeff: np.ndarray

    def __post_init__(self) -> None:
        _check_shape(self.chart, self.coeff, (self.chart.complex_dim,))
        coeff = np.asarray(self.coeff, dtype=complex)
        object.__setattr__(self, "coeff", _frozen(coeff))


# ---------------------------------------------------------------------------
# Volume forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class VolumeFormField:
    """Strictly positive density against the Euclidean volume element.

    The normalization is fixed once here: the top power of the identity form
    has density ``n!``. Only ratios of volume forms enter the flow.
    """

    chart: GridChart
    density: np.ndarray
    _mass: float = field(init=False, repr=False, default=0.0)

    def __post_init__(self) -> None:
        density = np.asarray(self.density, dtype=float)
        _check_shape(self.chart, density, ())
        _check_finite(density, "volume form")
        if np.any(density <= 0.0):
            worst = np.unravel_index(int(np.argmin(density)), density.shape)
            raise PositivityLossError(
                f"volume density not positive at {tuple(map(int, worst))}",
                index=tuple(int(i) for i in worst),
                eigenvalue=float(density[worst]),
            )
        object.__setattr__(self, "density", _frozen(density))
        object.__setattr__(
            self,
            "_mass",
            float(np.mean(density)) * self.chart.period**self.chart.real_dim,
        )

    @property
    def total_mass(self) -> float:
        return self._mass

    def scaled(self, factor: float) -> VolumeFormField:
        return VolumeFormField(self.chart, self.density * factor)

    def ratio(self, other: VolumeFormField) -> ScalarField:
        """Pointwise density ratio ``self / other``."""
        return ScalarField(self.chart, self.density / other.density)

    def log_ratio(self, other: VolumeFormField) -> ScalarField:
        return ScalarField(self.chart, np.log(self.density) - np.log(other.density))


def flat_volume(chart: GridChart) -> VolumeFormField:
    """Top power of the identity form: density ``n!`` everywhere."""
    density = np.full(chart.shape, float(factorial(chart.complex_dim)))
    return VolumeFormField(chart, density)
