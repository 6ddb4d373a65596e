"""Norm time series and audits of the model's exact identities and bounds.

All norms are spectral-exact Parseval sums. The audits are pure functions
of a recorded trajectory: the energy balance is checked as an equality up
to time-quadrature error, the enstrophy bound as an inequality with an
explicit O(dt^2) slack for the centered time difference, and the H1 norm
as a uniform-boundedness monitor.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson

from .domain import Domain, grids
from .dynamics import State, derive
from .spectral import (
    SpectralField,
    eval_padded,
    l2_inner,
    random_band_limited,
    weighted_norm,
)


@dataclass
class DiagnosticsRecord:
    """One time sample of every norm used by the a-priori estimates."""

    t: float
    norm_w: float
    norm_u: float
    norm_grad_h_w: float
    norm_grad_h_u: float
    norm_psi_z: float
    norm_omega: float
    norm_grad_h_omega: float
    norm_u_z: float
    norm_w_z: float
    norm_grad_h_w_z: float
    norm_omega_z: float
    norm_psi_zz: float
    norm_lap_h_w: float
    # cumulative dissipation integrals (filled along a run)
    d_visc: float = 0.0
    d_eps: float = 0.0

    def energy(self) -> float:
        """0.5 * (||w||^2 + ||u||^2)."""
        return 0.5 * (self.norm_w**2 + self.norm_u**2)

    def dissipation_rate(self, Re: float, eps: float) -> tuple[float, float]:
        """(viscous, vertical) instantaneous dissipation rates."""
        visc = (self.norm_grad_h_w**2 + self.norm_grad_h_u**2) / Re
        vert = eps**2 * self.norm_psi_z**2
        return visc, vert

    def h1_squared(self) -> float:
        """||u||_H1^2 + ||w||_H1^2 with H1 = L2 + horizontal + vertical parts."""
        u_part = self.norm_u**2 + self.norm_grad_h_u**2 + self.norm_u_z**2
        w_part = self.norm_w**2 + self.norm_grad_h_w**2 + self.norm_w_z**2
        return u_part + w_part


CSV_COLUMNS = [f.name for f in fields(DiagnosticsRecord)] + ["energy", "energy_residual"]


def record(state: State) -> DiagnosticsRecord:
    """Evaluate all norms of one state spectrally."""
    g = grids(state.domain)
    w = state.w_hat
    om = state.omega_hat
    inv_kh2 = np.where(g.mean_h, 0.0, 1.0 / g.kh2_safe)
    kz2 = g.kz**2
    return DiagnosticsRecord(
        t=state.time,
        norm_w=weighted_norm(w),
        norm_u=weighted_norm(om, inv_kh2),
        norm_grad_h_w=weighted_norm(w, g.kh2),
        norm_grad_h_u=weighted_norm(om),
        norm_psi_z=weighted_norm(om, kz2 * inv_kh2**2),
        norm_omega=weighted_norm(om),
        norm_grad_h_omega=weighted_norm(om, g.kh2),
        norm_u_z=weighted_norm(om, kz2 * inv_kh2),
        norm_w_z=weighted_norm(w, kz2),
        norm_grad_h_w_z=weighted_norm(w, g.kh2 * kz2),
        norm_omega_z=weighted_norm(om, kz2),
        norm_psi_zz=weighted_norm(om, kz2**2 * inv_kh2**2),
        norm_lap_h_w=weighted_norm(w, g.kh2**2),
    )


def accumulate_dissipation(
    records: Sequence[DiagnosticsRecord], Re: float, eps: float
) -> None:
    """Fill the cumulative dissipation integrals.

    Uses cumulative Simpson quadrature: the rates decay on per-mode time
    scales as fast as eps^2 kz^2 / kh^2, so the trapezoid rule's O(dt^2)
    error would dominate the energy-balance residual.
    """
    if not records:
        return
    t = np.array([r.t for r in records])
    rates = np.array([r.dissipation_rate(Re, eps) for r in records])
    if len(records) == 1:
        records[0].d_visc = 0.0
        records[0].d_eps = 0.0
        return
    if len(records) == 2:
        cum = 0.5 * (t[1] - t[0]) * (rates[0] + rates[1])
        cum = np.vstack([np.zeros(2), cum])
    else:
        cum = cumulative_simpson(rates, x=t, axis=0, initial=0.0)
    for i, rec in enumerate(records):
        rec.d_visc = float(cum[i, 0])
        rec.d_eps = float(cum[i, 1])


def energy_residuals(records: Sequence[DiagnosticsRecord]) -> np.ndarray:
    """Relative energy-balance residual at every sample."""
    e0 = records[0].energy()
    denom = e0 if e0 > 0.0 else 1.0
    return np.array(
        [abs(r.energy() + r.d_visc + r.d_eps - e0) / denom for r in records]
    )


@dataclass
class AuditReport:
    """Outcome of one trajectory audit."""

    name: str
    max_residual: float
    tolerance: float
    passed: bool
    t_worst: float
    details: str = ""


def audit_energy_equality(
    records: Sequence[DiagnosticsRecord], tolerance: float = 1e-5
) -> AuditReport:
    """Check the exact energy balance along a trajectory.

    Residual: |E(t) + int_0^t dissipation - E(0)| / E(0); the identity is
    exact in the dealiased spatial discretization, so the residual is pure
    time-quadrature error.
    """
    if not records:
        raise ValueError("empty trajectory")
    res = energy_residuals(records)
    i = int(np.argmax(res))
    return AuditReport(
        name="energy_equality",
        max_residual=float(res[i]),
        tolerance=tolerance,
        passed=bool(res[i] <= tolerance),
        t_worst=records[i].t,
    )


def enstrophy_series(
    records: Sequence[DiagnosticsRecord], Re: float, eps: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """(t, lhs, rhs) samples of the enstrophy inequality plus the slack.

    d/dt ||omega||^2 is a centered difference at interior samples; the
    slack 3*dt^2*scale covers its O(dt^2) error, with scale estimated from
    the largest second difference of ||omega||^2 along the trajectory.
    """
    if eps <= 0.0:
        raise ValueError("the enstrophy bound requires eps > 0")
    if len(records) < 3:
        raise ValueError("need at least three samples for centered differences")
    t = np.array([r.t for r in records])
    ens = np.array([r.norm_omega**2 for r in records])
    dt = float(np.median(np.diff(t)))
    ddt = (ens[2:] - ens[:-2]) / (t[2:] - t[:-2])
    mid = slice(1, -1)
    lhs = (
        ddt
        + np.array([(2.0 / Re) * r.norm_grad_h_omega**2 for r in records])[mid]
        + np.array([eps**2 * r.norm_u_z**2 for r in records])[mid]
    )
    rhs = np.array([r.norm_grad_h_w**2 / eps**2 for r in records])[mid]
    curvature = float(np.max(np.abs(np.diff(ens, 2)))) / dt**2 if len(ens) > 2 else 0.0
    slack = 3.0 * dt**2 * max(curvature, 1.0)
    return t[mid], lhs, rhs, slack


def audit_enstrophy_inequality(
    records: Sequence[DiagnosticsRecord], Re: float, eps: float
) -> AuditReport:
    """Check the vorticity growth bound at every interior sample."""
    t, lhs, rhs, slack = enstrophy_series(records, Re, eps)
    violation = lhs - rhs - slack
    i = int(np.argmax(violation))
    worst = float(violation[i])
    return AuditReport(
        name="enstrophy_inequality",
        max_residual=max(worst, 0.0),
        tolerance=0.0,
        passed=bool(worst <= 0.0),
        t_worst=float(t[i]),
        details=f"slack={slack:.6g}",
    )


def audit_h1_boundedness(
    records: Sequence[DiagnosticsRecord],
    bound_factor: float = 10.0,
    slope_tol: float = 1e-8,
) -> AuditReport:
    """Monitor sup_t of the H1 norm and flag sustained growth.

    Passes when the H1 norm stays below bound_factor times its initial
    value and the linear-fit slope over the last half of the run does not
    exceed slope_tol relative to the initial value per unit time.
    """
    if not records:
        raise ValueError("empty trajectory")
    t = np.array([r.t for r in records])
    h1 = np.array([r.h1_squared() for r in records])
    h1_0 = h1[0] if h1[0] > 0.0 else 1.0
    sup_ratio = float(np.max(h1) / h1_0)

    half = len(records) // 2
    slope = 0.0
    if len(records) - half >= 2:
        slope = float(np.polyfit(t[half:], h1[half:], 1)[0]) / h1_0
    growing = slope > slope_tol
    passed = (sup_ratio <= bound_factor) and not growing
    i = int(np.argmax(h1))
    return AuditReport(
        name="h1_boundedness",
        max_residual=sup_ratio,
        tolerance=bound_factor,
        passed=bool(passed),
        t_worst=float(t[i]),
        details=f"late_slope={slope:.6g}",
    )


def _quad_inner3(domain: Domain, fields3, factor: int = 2) -> float:
    """Integral of a triple product by oversampled collocation quadrature."""
    vals = [eval_padded(f, factor) for f in fields3]
    prod = vals[0] * vals[1] * vals[2]
    return float(np.mean(prod) * domain.L**2)


def audit_identities(
    domain: Domain,
    n_samples: int = 10,
    seed: int = 0,
    tolerance: float = 1e-11,
) -> AuditReport:
    """Verify the advection and stream-function identities on random fields.

    Checks, with oversampled quadrature on band-limited samples:
    antisymmetry (u.grad_h f, g) = -(u.grad_h g, f), the skew-symmetry
    (u.grad_h f, f) = 0, the orthogonality (u.grad_h f, psi) = 0, and the
    spectral identity (omega, psi) = ||u||^2.
    """
    rng = np.random.default_rng(seed)
    g = grids(domain)
    worst = 0.0
    for _ in range(n_samples):
        psi = random_band_limited(domain, rng, alpha=1.0, zero_mean_h=True)
        f = random_band_limited(domain, rng, alpha=1.0)
        h = random_band_limited(domain, rng, alpha=1.0)
        u = SpectralField(domain, 1j * g.kyd * psi.coeffs)
        v = SpectralField(domain, -1j * g.kxd * psi.coeffs)
        fx = SpectralField(domain, 1j * g.kxd * f.coeffs)
        fy = SpectralField(domain, 1j * g.kyd * f.coeffs)
        hx = SpectralField(domain, 1j * g.kxd * h.coeffs)
        hy = SpectralField(domain, 1j * g.kyd * h.coeffs)
        omega = SpectralField(domain, g.kh2 * psi.coeffs)

        adv_f_h = _quad_inner3(domain, (u, fx, h)) + _quad_inner3(domain, (v, fy, h))
        adv_h_f = _quad_inner3(domain, (u, hx, f)) + _quad_inner3(domain, (v, hy, f))
        adv_f_f = _quad_inner3(domain, (u, fx, f)) + _quad_inner3(domain, (v, fy, f))
        adv_f_psi = _quad_inner3(domain, (u, fx, psi)) + _quad_inner3(
            domain, (v, fy, psi)
        )

        scale = max(
            weighted_norm(u) * weighted_norm(fx) * weighted_norm(h), 1e-300
        )
        worst = max(worst, abs(adv_f_h + adv_h_f) / scale)
        worst = max(worst, abs(adv_f_f) / scale)
        worst = max(worst, abs(adv_f_psi) / scale)

        u_sq = weighted_norm(u) ** 2 + weighted_norm(v) ** 2
        worst = max(
            worst, abs(l2_inner(omega, psi) - u_sq) / max(u_sq, 1e-300)
        )
    return AuditReport(
        name="advection_identities",
        max_residual=worst,
        tolerance=tolerance,
        passed=bool(worst <= tolerance),
        t_worst=0.0,
    )


def cross_term_defect(state: State) -> float:
    """|<psi_z, w> + <w_z, psi>| relative to the factor norms.

    Exact cancellation (integration by parts in z) underlies the energy
    balance derivation.
    """
    d = derive(state)
    g = grids(state.domain)
    psi_z = SpectralField(state.domain, 1j * g.kzd * d.psi_hat.coeffs)
    w_z = SpectralField(state.domain, 1j * g.kzd * state.w_hat.coeffs)
    a = l2_inner(psi_z, state.w_hat)
    b = l2_inner(w_z, d.psi_hat)
    scale = max(
        weighted_norm(psi_z) * weighted_norm(state.w_hat)
        + weighted_norm(w_z) * weighted_norm(d.psi_hat),
        1e-300,
    )
    return abs(a + b) / scale
