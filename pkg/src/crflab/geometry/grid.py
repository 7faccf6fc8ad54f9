"""Periodic grid charts and real-axis differentiation backends."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property

import numpy as np
import scipy.fft

from crflab.errors import ConfigError

MIN_RESOLUTION = 16


class DifferentiationMode(StrEnum):
    """Backend used for real-axis derivatives."""

    spectral = "spectral"
    fd4 = "fd4"


@dataclass(frozen=True)
class GridChart:
    """A uniform periodic lattice over the fundamental domain [0, period)^{2n}.

    Axis ``2k`` samples ``x_k`` and axis ``2k + 1`` samples ``y_k`` for
    ``z_k = x_k + i y_k``. Field arrays keep the spatial axes first and any
    tensor component axes trailing.
    """

    complex_dim: int
    resolution: int
    period: float = 1.0
    mode: DifferentiationMode = DifferentiationMode.spectral

    def __post_init__(self) -> None:
        if self.complex_dim not in (1, 2):
            raise ConfigError(f"complex_dim must be 1 or 2, got {self.complex_dim}")
        if self.resolution < MIN_RESOLUTION or self.resolution % 2:
            raise ConfigError(
                f"resolution must be even and >= {MIN_RESOLUTION}, "
                f"got {self.resolution}"
            )
        if self.period <= 0:
            raise ConfigError(f"period must be positive, got {self.period}")

    # -- lattice metadata ---------------------------------------------------

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.resolution,) * self.real_dim

    @property
    def spacing(self) -> float:
        return self.period / self.resolution

    @property
    def max_wavenumber(self) -> float:
        """Largest resolved angular frequency along one real axis."""
        return np.pi * self.resolution / self.period

    @cached_property
    def axis_samples(self) -> np.ndarray:
        return np.arange(self.resolution) * self.spacing

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Return ``(x_1, y_1[, x_2, y_2])`` sampled on the full grid."""
        axes = [self.axis_samples] * self.real_dim
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def cell_distance(self, center: tuple[int, ...]) -> np.ndarray:
        """Periodic Euclidean distance (in grid cells) from the *center* index."""
        total = np.zeros(self.shape)
        for axis, c in enumerate(center):
            idx = np.arange(self.resolution)
            d = np.abs(idx - c)
            d = np.minimum(d, self.resolution - d).astype(float)
            shape = [1] * self.real_dim
            shape[axis] = self.resolution
            total = total + d.reshape(shape) ** 2
        return np.sqrt(total)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * scipy.fft.fftfreq(self.resolution, d=self.spacing)

    def effective_wavenumbers(self) -> np.ndarray:
        """Per-axis symbol magnitude of the first-derivative backend."""
        if self.mode is DifferentiationMode.spectral:
            k = self.wavenumbers.copy()
            k[self.resolution // 2] = 0.0
            return k
        kh = self.wavenumbers * self.spacing
        return (8.0 * np.sin(kh) - np.sin(2.0 * kh)) / (6.0 * self.spacing)

    def _broadcast(self, symbol: np.ndarray, axis: int, ndim: int) -> np.ndarray:
        shape = [1] * ndim
        shape[axis] = self.resolution
        return symbol.reshape(shape)

    # -- real-axis derivatives ----------------------------------------------

    def derivative(self, values: np.ndarray, axis: int) -> np.ndarray:
        """First derivative of *values* along spatial *axis*."""
        if self.mode is DifferentiationMode.spectral:
            return self._spectral_derivative(values, axis)
        return self._fd4_derivative(values, axis)

    def _spectral_derivative(self, values: np.ndarray, axis: int) -> np.ndarray:
        symbol = 1j * self.wavenumbers
        # Odd derivatives drop the unpaired Nyquist mode.
        symbol[self.resolution // 2] = 0.0
        spectrum = scipy.fft.fft(values, axis=axis)
        result = scipy.fft.ifft(
            spectrum * self._broadcast(symbol, axis, values.ndim), axis=axis
        )
        if np.isrealobj(values):
            return result.real
        return result

    def _fd4_derivative(self, values: np.ndarray, axis: int) -> np.ndarray:
        h = self.spacing
        return (
            -np.roll(values, -2, axis=axis)
            + 8.0 * np.roll(values, -1, axis=axis)
            - 8.0 * np.roll(values, 1, axis=axis)
            + np.roll(values, 2, axis=axis)
        ) / (12.0 * h)

    def dz(self, values: np.ndarray, k: int) -> np.ndarray:
        """Holomorphic derivative ``d/dz_k = (d/dx_k - i d/dy_k) / 2``."""
        return 0.5 * (
            self.derivative(values, 2 * k) - 1j * self.derivative(values, 2 * k + 1)
        )

    def dzbar(self, values: np.ndarray, k: int) -> np.ndarray:
        """Antiholomorphic derivative ``d/dzbar_k = (d/dx_k + i d/dy_k) / 2``."""
        return 0.5 * (
            self.derivative(values, 2 * k) + 1j * self.derivative(values, 2 * k + 1)
        )

    # -- Fourier-space helpers ----------------------------------------------

    def ddbar_trace_symbol(self) -> np.ndarray:
        """Fourier symbol of ``sum_k d^2/dz_k dzbar_k`` (a quarter Laplacian)."""
        total = np.zeros(self.shape)
        for axis in range(self.real_dim):
            k = self.effective_wavenumbers()
            total = total - 0.25 * self._broadcast(k**2, axis, self.real_dim)
        return total

    def apply_symbol(self, values: np.ndarray, symbol: np.ndarray) -> np.ndarray:
        """Multiply the spectrum of *values* by *symbol* (division by inverse)."""
        axes = tuple(range(self.real_dim))
        spectrum = scipy.fft.fftn(values, axes=axes)
        result = scipy.fft.ifftn(spectrum * symbol, axes=axes)
        if np.isrealobj(values):
            return result.real
        return result

    def lowpass(
        self, values: np.ndarray, strength: float = 36.0, order: int = 8
    ) -> np.ndarray:
        """Exponential spectral filter ``exp(-strength (|k|/k_max)^order)``."""
        weight = np.ones(self.shape)
        for axis in range(self.real_dim):
            ratio = np.abs(self.wavenumbers) / self.max_wavenumber
            weight = weight * self._broadcast(
                np.exp(-strength * ratio**order), axis, self.real_dim
            )
        return self.apply_symbol(values, weight)
