"""Model state, derived fields, right-hand side, and per-mode linearization.

Prognostic variables are the vertical velocity w and the vertical
vorticity omega, both as spectral fields; the stream function and the
horizontal velocity are always re-derived so the divergence-free and
zero-mean gauge constraints stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .domain import Domain, Mode, grids
from .errors import BlowUpError
from .spectral import (
    SpectralField,
    fwd,
    inv,
    inv_neg_laplacian_h,
    velocity_from_psi,
)

#: optional forcing: t -> (coeff array added to dw, coeff array added to domega)
Forcing = Callable[[float], tuple[np.ndarray, np.ndarray]]


@dataclass
class State:
    """Prognostic pair (w_hat, omega_hat) at one simulation time."""

    w_hat: SpectralField
    omega_hat: SpectralField
    time: float = 0.0

    @property
    def domain(self) -> Domain:
        return self.w_hat.domain

    def copy(self) -> "State":
        return State(self.w_hat.copy(), self.omega_hat.copy(), self.time)


@dataclass
class DerivedFields:
    """Stream function and horizontal velocity implied by omega."""

    psi_hat: SpectralField
    u_hat: SpectralField
    v_hat: SpectralField


@dataclass
class Tendency:
    """Time derivatives of the prognostic pair."""

    dw_hat: SpectralField
    domega_hat: SpectralField


@dataclass(frozen=True)
class LinearSymbol:
    """Per-mode 2x2 matrix coupling (w_hat, omega_hat) in the linear part."""

    mode: Mode
    A: np.ndarray


def derive(state: State) -> DerivedFields:
    """Compute psi = (-lap_h)^{-1} omega and u = (psi_y, -psi_x)."""
    psi = inv_neg_laplacian_h(state.omega_hat)
    u, v = velocity_from_psi(psi)
    return DerivedFields(psi, u, v)


def linear_symbol(mode: Mode, domain: Domain) -> LinearSymbol:
    """Exact Fourier symbol of the linear terms at one mode.

    For kh2 = 0 the matrix is zero: omega vanishes there by the gauge,
    lap_h w vanishes, and psi is gauge-zero.
    """
    kh2 = mode.kh2
    if kh2 == 0.0:
        return LinearSymbol(mode, np.zeros((2, 2), dtype=complex))
    kz = mode.kz
    nu = kh2 / domain.Re
    A = np.array(
        [
            [-nu, 1j * kz / kh2],
            [1j * kz, -nu - domain.eps**2 * kz**2 / kh2],
        ],
        dtype=complex,
    )
    return LinearSymbol(mode, A)


def linear_symbol_arrays(domain: Domain) -> tuple[np.ndarray, ...]:
    """Vectorized (a11, a12, a21, a22) over the whole half-spectrum."""
    g = grids(domain)
    active = ~g.mean_h
    nu = g.kh2 / domain.Re
    zero = np.zeros(domain.spectral_shape)
    a11 = np.where(active, -nu, 0.0).astype(complex) + zero
    a12 = np.where(active, 1j * g.kzd / g.kh2_safe, 0.0) + zero
    a21 = np.where(active, 1j * g.kzd, 0.0) + zero
    a22 = np.where(active, -nu - domain.eps**2 * g.kz**2 / g.kh2_safe, 0.0) + zero
    return a11, a12, a21, a22


def mode_energy(mode: Mode, w_coeff: complex, omega_coeff: complex) -> float:
    """Per-mode content of the energy ||w||^2 + ||u||^2 (up to the L^2 factor)."""
    e = abs(w_coeff) ** 2
    if mode.kh2 > 0.0:
        e += abs(omega_coeff) ** 2 / mode.kh2
    return float(e)


def _effective_radius(domain: Domain, override: int | None = None) -> int | None:
    return override if override is not None else domain.galerkin_radius


def nonlinear_rhs(
    domain: Domain,
    w_c: np.ndarray,
    om_c: np.ndarray,
    galerkin_radius: int | None = None,
) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Dealiased advection tendencies (-u.grad_h w, -u.grad_h omega).

    Returns (Nw, Nomega, max|u|, max|v|); the velocity maxima feed the CFL
    check. Horizontal-mean rows are zeroed exactly (the advective flux has
    zero horizontal mean).
    """
    g = grids(domain)
    mask = g.dealias_mask
    m = _effective_radius(domain, galerkin_radius)
    if m is not None:
        mask = mask & g.ball_mask(m)

    psi = np.where(g.mean_h, 0.0, om_c / g.kh2_safe)
    u_c = 1j * g.kyd * psi
    v_c = -1j * g.kxd * psi

    U = inv(domain, np.where(mask, u_c, 0.0))
    V = inv(domain, np.where(mask, v_c, 0.0))
    wm = np.where(mask, w_c, 0.0)
    om = np.where(mask, om_c, 0.0)
    WX = inv(domain, 1j * g.kxd * wm)
    WY = inv(domain, 1j * g.kyd * wm)
    OX = inv(domain, 1j * g.kxd * om)
    OY = inv(domain, 1j * g.kyd * om)

    n_w = np.where(mask, -fwd(domain, U * WX + V * WY), 0.0)
    n_om = np.where(mask, -fwd(domain, U * OX + V * OY), 0.0)
    n_w[0, 0, :] = 0.0
    n_om[0, 0, :] = 0.0
    return n_w, n_om, float(np.max(np.abs(U))), float(np.max(np.abs(V)))


def rhs(state: State, forcing: Optional[Forcing] = None) -> Tendency:
    """Full tendency of the model: advection + linear coupling + dissipation.

    Raises BlowUpError on non-finite values in the state or the result.
    """
    domain = state.domain
    w_c, om_c = state.w_hat.coeffs, state.omega_hat.coeffs
    if not (np.all(np.isfinite(w_c)) and np.all(np.isfinite(om_c))):
        raise BlowUpError(f"non-finite state at t={state.time:.6g}")

    n_w, n_om, _, _ = nonlinear_rhs(domain, w_c, om_c)
    a11, a12, a21, a22 = linear_symbol_arrays(domain)
    dw = n_w + a11 * w_c + a12 * om_c
    dom = n_om + a21 * w_c + a22 * om_c
    if forcing is not None:
        fw, fom = forcing(state.time)
        dw = dw + fw
        dom = dom + fom
    if not (np.all(np.isfinite(dw)) and np.all(np.isfinite(dom))):
        raise BlowUpError(f"non-finite tendency at t={state.time:.6g}")
    return Tendency(SpectralField(domain, dw), SpectralField(domain, dom))
