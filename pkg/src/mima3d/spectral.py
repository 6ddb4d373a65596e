"""Real-to-complex 3D spectral representation and differential operators.

Coefficients are basis amplitudes: coeff(j) multiplies
exp(2*pi*i*[(j1*x + j2*y)/L + j3*z]), so a constant field has a single
(0,0,0) coefficient and Parseval reads ||F||_2^2 = L^2 * sum_j |c_j|^2.
Storage is the half-spectrum (nonnegative j1) of numpy's real FFT with the
x axis as the reduced axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Domain, grids
from .errors import GaugeError, HermitianSymmetryError, ShapeError

# rfftn/irfftn axis order: y and z are full complex transforms, x is the
# final (real, halved) transform
_AXES = (1, 2, 0)

HERMITIAN_TOL = 1e-10
GAUGE_TOL = 1e-10


@dataclass
class PhysicalField:
    """Real scalar samples at the collocation points of a domain."""

    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.domain.shape:
            raise ShapeError(
                f"physical field shape {self.values.shape} != grid {self.domain.shape}"
            )


@dataclass
class SpectralField:
    """Half-spectrum complex coefficients of one real scalar field."""

    domain: Domain
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.domain.spectral_shape:
            raise ShapeError(
                f"spectral field shape {self.coeffs.shape} != "
                f"expected {self.domain.spectral_shape}"
            )

    def copy(self) -> "SpectralField":
        return SpectralField(self.domain, self.coeffs.copy())


# ---------------------------------------------------------------------------
# array-level core (used by the dynamics hot path)
# ---------------------------------------------------------------------------

def fwd(domain: Domain, values: np.ndarray) -> np.ndarray:
    """Physical samples -> amplitude-normalized half-spectrum coefficients."""
    return np.fft.rfftn(values, axes=_AXES) / domain.n_points


def inv(domain: Domain, coeffs: np.ndarray) -> np.ndarray:
    """Amplitude coefficients -> physical samples (real array)."""
    Nx, Ny, Nz = domain.shape
    return np.fft.irfftn(coeffs * domain.n_points, s=(Ny, Nz, Nx), axes=_AXES)


def hermitian_defect(domain: Domain, coeffs: np.ndarray) -> float:
    """Max |c(j) - conj(c(-j))| over the self-conjugate x planes."""
    Ny, Nz = domain.Ny, domain.Nz
    ry = (-np.arange(Ny)) % Ny
    rz = (-np.arange(Nz)) % Nz
    defect = 0.0
    for ix in (0, domain.Nx // 2):
        plane = coeffs[ix]
        mirrored = np.conj(plane[np.ix_(ry, rz)])
        defect = max(defect, float(np.max(np.abs(plane - mirrored))))
    return defect


def symmetrize(domain: Domain, coeffs: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian-symmetric subspace (in place on a copy)."""
    Ny, Nz = domain.Ny, domain.Nz
    ry = (-np.arange(Ny)) % Ny
    rz = (-np.arange(Nz)) % Nz
    out = coeffs.copy()
    for ix in (0, domain.Nx // 2):
        plane = out[ix]
        out[ix] = 0.5 * (plane + np.conj(plane[np.ix_(ry, rz)]))
    return out


def coeff_norm(coeffs: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(coeffs) ** 2)))


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def forward_transform(f: PhysicalField) -> SpectralField:
    """Expand a real field in the Fourier basis of its box."""
    if not np.all(np.isfinite(f.values)):
        raise ValueError("physical field contains non-finite values")
    return SpectralField(f.domain, fwd(f.domain, f.values))


def inverse_transform(F: SpectralField) -> PhysicalField:
    """Evaluate a spectral field at the collocation points.

    Raises HermitianSymmetryError if the self-conjugate planes break
    conjugate symmetry beyond HERMITIAN_TOL relative to the field size.
    """
    scale = max(coeff_norm(F.coeffs), 1e-300)
    defect = hermitian_defect(F.domain, F.coeffs)
    if defect > HERMITIAN_TOL * scale:
        raise HermitianSymmetryError(
            f"Hermitian symmetry broken: defect {defect:.3e} "
            f"(tolerance {HERMITIAN_TOL * scale:.3e})"
        )
    return PhysicalField(F.domain, inv(F.domain, F.coeffs))


# ---------------------------------------------------------------------------
# differential operators (diagonal symbols)
# ---------------------------------------------------------------------------

def grad_h(F: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Horizontal gradient (d/dx, d/dy)."""
    g = grids(F.domain)
    return (
        SpectralField(F.domain, 1j * g.kxd * F.coeffs),
        SpectralField(F.domain, 1j * g.kyd * F.coeffs),
    )


def d_dz(F: SpectralField) -> SpectralField:
    """Vertical derivative d/dz."""
    g = grids(F.domain)
    return SpectralField(F.domain, 1j * g.kzd * F.coeffs)


def laplacian_h(F: SpectralField) -> SpectralField:
    """Horizontal Laplacian (multiplication by -kh^2)."""
    g = grids(F.domain)
    return SpectralField(F.domain, -g.kh2 * F.coeffs)


def inv_neg_laplacian_h(omega: SpectralField) -> SpectralField:
    """Stream function psi = (-lap_h)^{-1} omega in the zero-mean gauge.

    Every kh2 = 0 coefficient of omega must vanish (relative tolerance
    GAUGE_TOL); the corresponding psi coefficients are set exactly to zero.
    """
    g = grids(omega.domain)
    c = omega.coeffs
    scale = max(coeff_norm(c), 1e-300)
    mean_content = np.abs(c[0, 0, :])
    bad = np.nonzero(mean_content > GAUGE_TOL * scale)[0]
    if bad.size:
        offenders = ", ".join(f"(0,0,{int(g.jz[0, 0, i])})" for i in bad[:8])
        raise GaugeError(
            f"omega has nonzero horizontal-mean content at modes {offenders}"
            f" (max |coeff| = {mean_content[bad].max():.3e}, "
            f"tolerance {GAUGE_TOL * scale:.3e})"
        )
    psi = np.where(g.mean_h, 0.0, c / g.kh2_safe)
    return SpectralField(omega.domain, psi)


def velocity_from_psi(psi: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Divergence-free horizontal velocity u = (psi_y, -psi_x)."""
    g = grids(psi.domain)
    return (
        SpectralField(psi.domain, 1j * g.kyd * psi.coeffs),
        SpectralField(psi.domain, -1j * g.kxd * psi.coeffs),
    )


def curl_h(u: SpectralField, v: SpectralField) -> SpectralField:
    """Vertical vorticity v_x - u_y."""
    g = grids(u.domain)
    return SpectralField(u.domain, 1j * g.kxd * v.coeffs - 1j * g.kyd * u.coeffs)


# ---------------------------------------------------------------------------
# products and projections
# ---------------------------------------------------------------------------

def dealias_product(F: SpectralField, G: SpectralField) -> SpectralField:
    """Pointwise product with the strict 2/3 rule in all three directions.

    Inputs are truncated before the collocation product and the result is
    truncated again, so quadratics of band-limited fields are alias-free.
    """
    if F.domain != G.domain:
        raise ShapeError("dealias_product requires fields on the same domain")
    d = F.domain
    g = grids(d)
    m = g.dealias_mask
    fv = inv(d, np.where(m, F.coeffs, 0.0))
    gv = inv(d, np.where(m, G.coeffs, 0.0))
    return SpectralField(d, np.where(m, fwd(d, fv * gv), 0.0))


def galerkin_project(F: SpectralField, m: int) -> SpectralField:
    """Zero all coefficients outside the Euclidean mode ball |j| <= m."""
    if m < 0:
        raise ValueError("galerkin radius must be >= 0")
    g = grids(F.domain)
    return SpectralField(F.domain, np.where(g.ball_mask(m), F.coeffs, 0.0))


# ---------------------------------------------------------------------------
# Parseval norms and inner products
# ---------------------------------------------------------------------------

def weighted_norm(F: SpectralField, symbol_sq: np.ndarray | float = 1.0) -> float:
    """sqrt(L^2 * sum_j symbol_sq(j) * |c_j|^2) over the full spectrum."""
    g = grids(F.domain)
    s = np.sum(g.weight * symbol_sq * np.abs(F.coeffs) ** 2)
    return float(np.sqrt(F.domain.L**2 * s))


def l2_norm(F: SpectralField) -> float:
    """||F||_2 by Parseval."""
    return weighted_norm(F, 1.0)


def grad_h_norm(F: SpectralField) -> float:
    """||grad_h F||_2."""
    return weighted_norm(F, grids(F.domain).kh2)


def dz_norm(F: SpectralField) -> float:
    """||F_z||_2."""
    return weighted_norm(F, grids(F.domain).kz ** 2)


def laplacian_h_norm(F: SpectralField) -> float:
    """||lap_h F||_2."""
    return weighted_norm(F, grids(F.domain).kh2 ** 2)


def l2_inner(F: SpectralField, G: SpectralField) -> float:
    """L^2(Omega) inner product of two real fields, evaluated spectrally."""
    if F.domain != G.domain:
        raise ShapeError("inner product requires fields on the same domain")
    g = grids(F.domain)
    s = np.sum(g.weight * np.real(np.conj(F.coeffs) * G.coeffs))
    return float(F.domain.L**2 * s)


# ---------------------------------------------------------------------------
# zero-padded evaluation (oversampled quadrature support)
# ---------------------------------------------------------------------------

def pad_coeffs(domain: Domain, coeffs: np.ndarray, padded: Domain) -> np.ndarray:
    """Embed half-spectrum coefficients into a finer grid's layout.

    Nyquist planes of the source must be empty; callers pass band-limited
    fields (dealiased or sampled below the cutoff), for which this is exact.
    """
    out = np.zeros(padded.spectral_shape, dtype=complex)
    g = grids(domain)
    ty = (g.jy.ravel()) % padded.Ny
    tz = (g.jz.ravel()) % padded.Nz
    nx = domain.Nx // 2 + 1
    out[np.ix_(np.arange(nx), ty, tz)] = coeffs
    return out


def padded_domain(domain: Domain, factor: int) -> Domain:
    return Domain(
        L=domain.L,
        Nx=factor * domain.Nx,
        Ny=factor * domain.Ny,
        Nz=factor * domain.Nz,
        Re=domain.Re,
        eps=domain.eps,
    )


def eval_padded(F: SpectralField, factor: int) -> np.ndarray:
    """Sample a band-limited field on a grid refined by an integer factor."""
    big = padded_domain(F.domain, factor)
    return inv(big, pad_coeffs(F.domain, F.coeffs, big))


# ---------------------------------------------------------------------------
# random band-limited fields
# ---------------------------------------------------------------------------

def random_band_limited(
    domain: Domain,
    rng: np.random.Generator,
    bandwidth: int | tuple[int, int, int] | None = None,
    alpha: float = 0.0,
    exp_rate: float = 0.0,
    anisotropy: str = "iso",
    zero_mean_h: bool = False,
) -> SpectralField:
    """Random real field with prescribed spectral envelope and bandwidth.

    |coeff| is shaped by (1+|j|)^(-alpha) * exp(-exp_rate*|j|); bandwidth
    defaults to the dealias cutoff of the grid. anisotropy selects "iso",
    "h_only" (no z dependence) or "z_only" (no horizontal dependence).
    """
    g = grids(domain)
    c = fwd(domain, rng.standard_normal(domain.shape))
    if bandwidth is None:
        bw = (g.Kx, g.Ky, g.Kz)
    elif isinstance(bandwidth, int):
        bw = (bandwidth, bandwidth, bandwidth)
    else:
        bw = bandwidth
    mask = (
        (np.abs(g.jx) <= bw[0]) & (np.abs(g.jy) <= bw[1]) & (np.abs(g.jz) <= bw[2])
    )
    if anisotropy == "h_only":
        mask = mask & (g.jz == 0)
    elif anisotropy == "z_only":
        mask = mask & (g.jx == 0) & (g.jy == 0)
    elif anisotropy != "iso":
        raise ValueError(f"unknown anisotropy {anisotropy!r}")
    jmag = np.sqrt(g.j2.astype(float))
    envelope = (1.0 + jmag) ** (-alpha) * np.exp(-exp_rate * jmag)
    c = np.where(mask, c * envelope, 0.0)
    if zero_mean_h:
        c[0, 0, :] = 0.0
    return SpectralField(domain, c)
