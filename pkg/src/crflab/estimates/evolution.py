"""Parabolic evolution identities along a trajectory.

Two time derivatives are used: ``centered`` snapshot differences at interior
snapshots (second order in the spacing) and ``exact`` derivatives rebuilt
from the cached ``phidot`` at every snapshot, which leaves only spatial
discretization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, partial

import numpy as np

from crflab.background import (
    BackgroundData,
    reference_derivative,
    reference_metric,
    s_current,
)
from crflab.estimates.models import EvolutionReport, LogTraceReport, ResidualSeries
from crflab.estimates.series import centered_difference
from crflab.flow import Snapshot, Trajectory, snapshot_metric
from crflab.flow.identity import centered_indices
from crflab.geometry import (
    MetricField,
    ScalarField,
    chern_curvature,
    christoffels,
    ddbar,
    laplacian,
    torsion,
)
from crflab.geometry.operators import ddbar_tensor, dz_tensor, dzbar_tensor, trace_array


def _sup(values: np.ndarray, mask: np.ndarray) -> float:
    return float(np.max(np.abs(values[~mask])))


def _einsum(spec: str, *operands: np.ndarray) -> np.ndarray:
    return np.einsum(spec, *operands, optimize=True)


def gradient_norm(g: MetricField, f: np.ndarray) -> np.ndarray:
    """``|d f|_g^2 = g^{jbar i} d_i f dbar_j f`` for real ``f``."""
    df = dz_tensor(g.chart, f)
    return _einsum("...ji,...i,...j->...", g.inverse, df, np.conj(df)).real


# ---------------------------------------------------------------------------
# Potential identities
# ---------------------------------------------------------------------------


def phi_tilde_shift(trajectory: Trajectory, unmasked_only: bool = False) -> float:
    """``C0 = 1 - inf(phi - psi)`` so that ``phi - psi + C0 >= 1``."""
    bg = trajectory.background
    lowest = math.inf
    for snap in trajectory.snapshots:
        tilde = snap.phi.values - bg.psi.values
        values = tilde[bg.unmasked] if unmasked_only else tilde
        lowest = min(lowest, float(np.min(values)))
    return 1.0 - lowest


@dataclass
class _Frame:
    """Spatial quantities of one snapshot shared by the identity residuals."""

    bg: BackgroundData
    snap: Snapshot
    c0_shift: float

    @cached_property
    def omega(self) -> MetricField:
        return snapshot_metric(self.bg, self.snap)

    @cached_property
    def phi_tilde(self) -> np.ndarray:
        return self.snap.phi.values - self.bg.psi.values

    @cached_property
    def frac(self) -> np.ndarray:
        return 1.0 / (self.phi_tilde + self.c0_shift)

    def lap(self, values: np.ndarray) -> np.ndarray:
        return laplacian(self.omega, ScalarField(self.bg.chart, values)).values

    def tr_omega(self, alpha_coeff: np.ndarray) -> np.ndarray:
        return trace_array(self.omega.inverse, alpha_coeff)

    def phi_rhs(self) -> np.ndarray:
        n = self.bg.complex_dim
        ref = reference_metric(self.bg, self.snap.t).coeff
        return self.snap.phidot.values - n + self.tr_omega(ref)

    def phidot_rhs(self) -> np.ndarray:
        ref = reference_metric(self.bg, self.snap.t).coeff
        return self.tr_omega(self.bg.omega_inf.coeff - ref) - self.snap.phidot.values

    def phidot_dt(self) -> np.ndarray:
        """``d/dt phidot = tr_omega(d/dt omega) - phidot`` from the flow equation."""
        dt_omega = reference_derivative(self.bg, self.snap.t) + ddbar(self.snap.phidot)
        return self.tr_omega(dt_omega.coeff) - self.snap.phidot.values

    def phi_tilde_rhs(self) -> np.ndarray:
        n = self.bg.complex_dim
        current = s_current(self.bg, self.snap.t).coeff
        return self.snap.phidot.values - n + self.tr_omega(current)

    def frac_rhs(self) -> np.ndarray:
        n = self.bg.complex_dim
        u = self.phi_tilde + self.c0_shift
        current = s_current(self.bg, self.snap.t).coeff
        grad = gradient_norm(self.omega, self.phi_tilde)
        return (
            -self.snap.phidot.values / u**2
            + (n - self.tr_omega(current)) / u**2
            - 2.0 * grad / u**3
        )


IDENTITIES = ("phi", "phidot", "phi_tilde", "frac")


def check_evolution_identities(
    trajectory: Trajectory, bg: BackgroundData, c0_shift: float | None = None
) -> EvolutionReport:
    """Residuals of ``(d/dt - Delta)`` applied to ``phi``, ``phidot``, ``phi - psi``
    and ``1/(phi - psi + C0)`` against their closed forms."""
    if c0_shift is None:
        c0_shift = phi_tilde_shift(trajectory)
    mask = bg.pole_mask
    snaps = trajectory.snapshots
    times = trajectory.times
    frames = [_Frame(bg, s, c0_shift) for s in snaps]

    centered = {name: ResidualSeries(name, [], []) for name in IDENTITIES}
    for i in centered_indices(times):
        spacing = float(times[i + 1] - times[i])
        before, mid, after = frames[i - 1], frames[i], frames[i + 1]

        ddt = partial(centered_difference, spacing=spacing)

        lhs = {
            "phi": ddt(before.snap.phi.values, after.snap.phi.values)
            - mid.lap(mid.snap.phi.values),
            "phidot": ddt(before.snap.phidot.values, after.snap.phidot.values)
            - mid.lap(mid.snap.phidot.values),
            "phi_tilde": ddt(before.phi_tilde, after.phi_tilde)
            - mid.lap(mid.phi_tilde),
            "frac": ddt(before.frac, after.frac) - mid.lap(mid.frac),
        }
        rhs = {
            "phi": mid.phi_rhs(),
            "phidot": mid.phidot_rhs(),
            "phi_tilde": mid.phi_tilde_rhs(),
            "frac": mid.frac_rhs(),
        }
        for name in IDENTITIES:
            centered[name].times.append(float(times[i]))
            centered[name].residuals.append(_sup(lhs[name] - rhs[name], mask))

    exact = {name: ResidualSeries(name, [], []) for name in IDENTITIES}
    for frame in frames:
        phidot = frame.snap.phidot.values
        u = frame.phi_tilde + c0_shift
        lhs = {
            "phi": phidot - frame.lap(frame.snap.phi.values),
            "phidot": frame.phidot_dt() - frame.lap(phidot),
            "phi_tilde": phidot - frame.lap(frame.phi_tilde),
            "frac": -phidot / u**2 - frame.lap(frame.frac),
        }
        rhs = {
            "phi": frame.phi_rhs(),
            "phidot": frame.phidot_rhs(),
            "phi_tilde": frame.phi_tilde_rhs(),
            "frac": frame.frac_rhs(),
        }
        for name, series in exact.items():
            series.times.append(frame.snap.t)
            series.residuals.append(_sup(lhs[name] - rhs[name], mask))

    indices = centered_indices(times)
    spacing = float(times[indices[0] + 1] - times[indices[0]]) if indices else None
    return EvolutionReport(spacing, centered, exact)


# ---------------------------------------------------------------------------
# Log-trace evolution
# ---------------------------------------------------------------------------


class LogTraceAssembly:
    """Two assemblies of ``(d/dt - Delta) log tr_{omega0} omega``.

    The coordinate form differentiates ``g0^{-1}`` directly:
    ``[G + D0 + R + M - tr] / tr + |d tr|_g^2 / tr^2`` with

    - G ``-g0^{lbar k} g^{qbar i} g^{jbar p} d_k g_{i jbar} dbar_l g_{p qbar}``
    - D0 ``-g^{jbar i} [d_i dbar_j(g0^{-1}) g + 2 Re d_i(g0^{-1}) dbar_j g]``
    - R ``g^{qbar p} g0^{lbar k} (d_k dbar_l - d_p dbar_q)`` of the reference
      metric, zero for n = 1
    - M ``tr_{omega0}(omega_inf + Ric(Omega))``, zero when the background pair is
      globally consistent.

    The covariant form (:meth:`brackets`) works with the Chern connection of
    ``omega0`` and splits the right-hand side into three brackets: gradients
    with their torsion corrections, the ``omega0`` curvature with the torsion
    derivative, and the reference-metric torsion weighted by ``e^{-t}``. It
    needs ``omega_inf`` closed, which every built-in scenario satisfies.
    """

    def __init__(self, bg: BackgroundData) -> None:
        self.bg = bg
        chart = bg.chart
        self.h0 = bg.omega0.inverse
        self.dh0 = dz_tensor(chart, self.h0)
        self.ddh0 = ddbar_tensor(chart, self.h0)
        self.d_omega0 = ddbar_tensor(chart, bg.omega0.coeff)
        self.d_omega_inf = ddbar_tensor(chart, bg.omega_inf.coeff)
        log_volume = ScalarField(chart, np.log(bg.volume_form.density))
        consistency = bg.omega_inf - ddbar(log_volume)
        self.model_term = trace_array(self.h0, consistency.coeff)

        t0 = torsion(bg.omega0)
        self.gamma0 = christoffels(bg.omega0).coeff  # [..., p, k, i]
        self.torsion0 = t0.coeff  # [..., p, i, k]
        self.torsion_trace = t0.trace()
        self.curvature0 = chern_curvature(bg.omega0).lowered(bg.omega0)
        # [..., i, q, j, l] = d_i conj(T^q_{jl}); [..., j, p, i, k] = dbar_j T^p_{ik}
        self.d_torsion_conj = dz_tensor(chart, np.conj(self.torsion0))
        self.dbar_torsion = dzbar_tensor(chart, self.torsion0)

    def trace(self, omega: MetricField) -> np.ndarray:
        return trace_array(self.h0, omega.coeff)

    def brackets(
        self, t: float, omega: MetricField, dg: np.ndarray, grad: np.ndarray
    ) -> dict[str, np.ndarray]:
        """Covariant brackets at one time; *grad* is ``|d tr|_g^2``.

        ``rhs = (first + second - third + M - tr) / tr``. Every torsion part
        is exactly zero on surfaces.
        """
        g, h = omega.coeff, omega.inverse
        g0, h0 = self.bg.omega0.coeff, self.h0
        t0, t0_bar = self.torsion0, np.conj(self.torsion0)
        tr = self.trace(omega)

        # nabla0_k g_{i jbar} and nabla0_lbar g_{p qbar}
        cov = dg - _einsum("...rki,...rj->...kij", self.gamma0, g)
        cov_bar = np.conj(np.swapaxes(cov, -1, -2))

        cov_square = _einsum(
            "...jp,...qi,...lk,...kij,...lpq->...", h, h, h0, cov, cov_bar
        )
        gradient = grad / tr - cov_square.real
        torsion_gradient = -2.0 * _einsum(
            "...ji,...lk,...pki,...lpj->...", h, h0, t0, cov_bar
        ).real
        torsion_square = -_einsum(
            "...ji,...lk,...pik,...qjl,...pq->...", h, h0, t0, t0_bar, g
        ).real

        curvature = -_einsum(
            "...ji,...lk,...kq,...ilpj,...qp->...", h, h0, g, self.curvature0, h0
        ).real
        curvature_torsion = _einsum(
            "...ji,...lk,...kq,...iqjl->...", h, h0, g, self.d_torsion_conj
        ).real

        third = math.exp(-t) * (
            _einsum("...ji,...lk,...jpik,...pl->...", h, h0, self.dbar_torsion, g0)
            + _einsum("...ji,...lk,...kqjl,...iq->...", h, h0, self.d_torsion_conj, g0)
            - _einsum("...ji,...lk,...pik,...qjl,...pq->...", h, h0, t0, t0_bar, g0)
        ).real

        first = gradient + torsion_gradient + torsion_square
        second = curvature + curvature_torsion
        return {
            "first": first,
            "second": second,
            "third": third,
            "torsion": torsion_gradient + torsion_square + curvature_torsion - third,
            "rhs": (first + second - third + self.model_term - tr) / tr,
        }

    def terms(self, snap: Snapshot) -> dict[str, np.ndarray]:
        bg = self.bg
        chart = bg.chart
        omega = snapshot_metric(bg, snap)
        g, h = omega.coeff, omega.inverse
        dg = dz_tensor(chart, g)
        dbg = dzbar_tensor(chart, g)
        tr = self.trace(omega)

        first = -_einsum(
            "...lk,...qi,...jp,...kij,...lpq->...", self.h0, h, h, dg, dbg
        ).real
        second = (
            -_einsum("...ji,...ijlk,...kl->...", h, self.ddh0, g).real
            - 2.0 * _einsum("...ji,...ilk,...jkl->...", h, self.dh0, dbg).real
        )
        decay = math.exp(-snap.t)
        d_ref = decay * self.d_omega0 + (1.0 - decay) * self.d_omega_inf
        reference = (
            _einsum("...qp,...lk,...klpq->...", h, self.h0, d_ref)
            - _einsum("...qp,...lk,...pqkl->...", h, self.h0, d_ref)
        ).real

        dtr = _einsum("...ilk,...kl->...i", self.dh0, g) + _einsum(
            "...lk,...ikl->...i", self.h0, dg
        )
        grad = _einsum("...ji,...i,...j->...", h, dtr, np.conj(dtr)).real
        rhs = (first + second + reference + self.model_term - tr) / tr + grad / tr**2

        dt_omega = reference_derivative(bg, snap.t) + ddbar(snap.phidot)
        log_tr = np.log(tr)
        lap_log_tr = laplacian(omega, ScalarField(chart, log_tr)).values
        exact_lhs = trace_array(self.h0, dt_omega.coeff) / tr - lap_log_tr

        torsion_flux = _einsum(
            "...lk,...k,...l->...", h, self.torsion_trace, np.conj(dtr)
        ).real
        torsion_grad = 2.0 * torsion_flux / tr**2
        brackets = self.brackets(snap.t, omega, dg, grad)
        return {
            "tr": tr,
            "log_tr": log_tr,
            "lap_log_tr": lap_log_tr,
            "rhs": rhs,
            "exact_lhs": exact_lhs,
            "torsion_grad": torsion_grad,
            "tr_inverse": trace_array(h, self.bg.omega0.coeff),
            **{f"bracket_{name}": value for name, value in brackets.items()},
        }


BRACKETS = ("first", "second", "third", "torsion")


def check_logtr_evolution(trajectory: Trajectory, bg: BackgroundData) -> LogTraceReport:
    """Identity residuals of the log-trace evolution and the fitted ``C_evo``.

    ``C_evo`` is the smallest ``C`` with ``(d/dt - Delta) log tr`` at most
    ``2 Re(g^{lbar k} T0_k dbar_l tr) / tr^2 + C tr_omega omega0`` at every
    unmasked point and snapshot, where ``T0_k = T0^p_{kp}``. ``assembly_gap``
    compares the covariant brackets with the coordinate right-hand side.
    """
    assembly = LogTraceAssembly(bg)
    mask = bg.pole_mask
    snaps = trajectory.snapshots
    times = trajectory.times
    frames = [assembly.terms(s) for s in snaps]

    exact = ResidualSeries("logtr", [], [])
    gap = ResidualSeries("logtr_brackets", [], [])
    bracket_sup = dict.fromkeys(BRACKETS, 0.0)
    c_evo = 0.0
    for snap, terms in zip(snaps, frames, strict=True):
        exact.times.append(snap.t)
        exact.residuals.append(_sup(terms["exact_lhs"] - terms["rhs"], mask))
        gap.times.append(snap.t)
        gap.residuals.append(_sup(terms["bracket_rhs"] - terms["rhs"], mask))
        ratio = (terms["exact_lhs"] - terms["torsion_grad"]) / terms["tr_inverse"]
        c_evo = max(c_evo, float(np.max(ratio[~mask])))
        for name in BRACKETS:
            bracket_sup[name] = max(
                bracket_sup[name], _sup(terms[f"bracket_{name}"], mask)
            )

    centered = ResidualSeries("logtr", [], [])
    for i in centered_indices(times):
        spacing = float(times[i + 1] - times[i])
        dt_log = centered_difference(
            frames[i - 1]["log_tr"], frames[i + 1]["log_tr"], spacing
        )
        lhs = dt_log - frames[i]["lap_log_tr"]
        centered.times.append(float(times[i]))
        centered.residuals.append(_sup(lhs - frames[i]["rhs"], mask))

    return LogTraceReport(
        centered,
        exact,
        bracket_sup["torsion"],
        c_evo,
        assembly_gap=gap,
        bracket_sup=bracket_sup,
    )
