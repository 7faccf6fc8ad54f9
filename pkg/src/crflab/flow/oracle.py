"""Exact solution of the homogeneous scenario by quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from crflab.background import BackgroundData
from crflab.errors import ConfigError

QUAD_TOL = 1e-13


@dataclass(frozen=True)
class HomogeneousData:
    n: int
    a0: float
    a_inf: float
    omega_const: float

    def forcing(self, s: float) -> float:
        """``h(s) = log(omega_hat_s^n / Omega)``."""
        a_s = math.exp(-s) * self.a0 - math.expm1(-s) * self.a_inf
        return math.log(math.factorial(self.n) * a_s**self.n / self.omega_const)


def homogeneous_data(bg: BackgroundData) -> HomogeneousData:
    """Extract the constants of a spatially homogeneous background."""
    n = bg.chart.complex_dim
    eye = np.eye(n)
    a0 = float(bg.omega0.coeff.reshape(-1, n, n)[0, 0, 0].real)
    a_inf = float(bg.omega_inf.coeff.reshape(-1, n, n)[0, 0, 0].real)
    density = bg.volume_form.density
    omega_const = float(density.flat[0])
    homogeneous = (
        np.allclose(bg.omega0.coeff, a0 * eye, rtol=0, atol=1e-14)
        and np.allclose(bg.omega_inf.coeff, a_inf * eye, rtol=0, atol=1e-14)
        and np.allclose(density, omega_const, rtol=0, atol=1e-14)
        and bg.psi.sup_abs() == 0.0
    )
    if not homogeneous:
        raise ConfigError("the ODE oracle needs a spatially homogeneous background")
    return HomogeneousData(n, a0, a_inf, omega_const)


def homogeneous_oracle(bg: BackgroundData, t: float) -> float:
    """``phi(t) = e^{-t} int_0^t e^s h(s) ds``."""
    data = homogeneous_data(bg)
    if t == 0:
        return 0.0
    value, _ = quad(
        lambda s: math.exp(s - t) * data.forcing(s),
        0.0,
        t,
        epsabs=QUAD_TOL,
        epsrel=QUAD_TOL,
        limit=200,
    )
    return float(value)


def homogeneous_oracle_rate(bg: BackgroundData, t: float) -> float:
    """``phidot(t) = h(t) - phi(t)``."""
    return homogeneous_data(bg).forcing(t) - homogeneous_oracle(bg, t)
