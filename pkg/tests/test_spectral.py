"""Transforms, operators, dealiasing, and Parseval bookkeeping."""

import numpy as np
import pytest

from mima3d.domain import Domain, grids
from mima3d.errors import GaugeError, HermitianSymmetryError, ShapeError
from mima3d.spectral import (
    PhysicalField,
    SpectralField,
    dealias_product,
    d_dz,
    eval_padded,
    forward_transform,
    fwd,
    galerkin_project,
    grad_h,
    grad_h_norm,
    hermitian_defect,
    inv,
    inverse_transform,
    inv_neg_laplacian_h,
    l2_inner,
    l2_norm,
    laplacian_h,
    random_band_limited,
    symmetrize,
    velocity_from_psi,
    weighted_norm,
)


def coords(domain):
    x = np.arange(domain.Nx) * domain.L / domain.Nx
    y = np.arange(domain.Ny) * domain.L / domain.Ny
    z = np.arange(domain.Nz) / domain.Nz
    return np.meshgrid(x, y, z, indexing="ij")


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def test_round_trip_random(domain, rng):
    f = random_band_limited(domain, rng)
    g = inverse_transform(f)
    back = forward_transform(g)
    assert np.max(np.abs(back.coeffs - f.coeffs)) < 1e-12


def test_round_trip_physical_first(domain_rect, rng):
    values = rng.standard_normal(domain_rect.shape)
    f = PhysicalField(domain_rect, values)
    again = inverse_transform(forward_transform(f))
    assert np.max(np.abs(again.values - values)) < 1e-12


def test_constant_field_is_single_coefficient(domain):
    f = forward_transform(PhysicalField(domain, np.full(domain.shape, 3.5)))
    assert abs(f.coeffs[0, 0, 0] - 3.5) < 1e-14
    rest = f.coeffs.copy()
    rest[0, 0, 0] = 0.0
    assert np.max(np.abs(rest)) < 1e-14


def test_single_cosine_amplitude(domain):
    X, _, _ = coords(domain)
    k = 2.0 * np.pi / domain.L
    f = forward_transform(PhysicalField(domain, np.cos(k * X)))
    # cos = (e^{i k x} + e^{-i k x}) / 2; the half-spectrum stores j1 = +1
    assert abs(f.coeffs[1, 0, 0] - 0.5) < 1e-14


def test_shape_validation():
    d = Domain(L=1.0, Nx=8, Ny=8, Nz=8, Re=1.0)
    with pytest.raises(ShapeError):
        PhysicalField(d, np.zeros((8, 8, 7)))
    with pytest.raises(ShapeError):
        SpectralField(d, np.zeros((8, 8, 8), dtype=complex))


def test_hermitian_defect_and_symmetrize(domain, rng):
    f = random_band_limited(domain, rng)
    assert hermitian_defect(domain, f.coeffs) < 1e-13
    broken = f.coeffs.copy()
    broken[0, 1, 2] += 1.0  # no matching conjugate at (0, -1, -2)
    assert hermitian_defect(domain, broken) > 0.1
    with pytest.raises(HermitianSymmetryError):
        inverse_transform(SpectralField(domain, broken))
    fixed = symmetrize(domain, broken)
    assert hermitian_defect(domain, fixed) < 1e-13


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def test_derivatives_exact_on_trig(domain_rect):
    d = domain_rect
    X, Y, Z = coords(d)
    k = 2.0 * np.pi / d.L
    f = forward_transform(
        PhysicalField(d, np.sin(k * X) * np.cos(2 * k * Y) * np.sin(2 * np.pi * Z))
    )
    fx, fy = grad_h(f)
    fz = d_dz(f)
    ex = k * np.cos(k * X) * np.cos(2 * k * Y) * np.sin(2 * np.pi * Z)
    ey = -2 * k * np.sin(k * X) * np.sin(2 * k * Y) * np.sin(2 * np.pi * Z)
    ez = 2 * np.pi * np.sin(k * X) * np.cos(2 * k * Y) * np.cos(2 * np.pi * Z)
    assert np.max(np.abs(inverse_transform(fx).values - ex)) < 1e-11
    assert np.max(np.abs(inverse_transform(fy).values - ey)) < 1e-11
    assert np.max(np.abs(inverse_transform(fz).values - ez)) < 1e-11


def test_laplacian_h_matches_gradient(domain, rng):
    f = random_band_limited(domain, rng)
    lap = laplacian_h(f)
    # <lap_h f, f> = -||grad_h f||^2
    assert abs(l2_inner(lap, f) + grad_h_norm(f) ** 2) < 1e-11 * max(
        grad_h_norm(f) ** 2, 1.0
    )


def test_inverse_laplacian_gauge(domain, rng):
    om = random_band_limited(domain, rng, zero_mean_h=True)
    psi = inv_neg_laplacian_h(om)
    back = laplacian_h(psi)
    assert np.max(np.abs(back.coeffs + om.coeffs)) < 1e-12
    # psi itself is gauge-zero
    assert np.max(np.abs(psi.coeffs[0, 0, :])) == 0.0


def test_inverse_laplacian_rejects_mean_content(domain, rng):
    om = random_band_limited(domain, rng)
    om.coeffs[0, 0, 1] = 1.0
    with pytest.raises(GaugeError):
        inv_neg_laplacian_h(om)


def test_velocity_is_divergence_free(domain, rng):
    psi = random_band_limited(domain, rng, zero_mean_h=True)
    u, v = velocity_from_psi(psi)
    ux, _ = grad_h(u)
    _, vy = grad_h(v)
    div = ux.coeffs + vy.coeffs
    assert np.max(np.abs(div)) < 1e-12 * max(l2_norm(u), 1.0)


# ---------------------------------------------------------------------------
# dealiased products vs a direct convolution oracle
# ---------------------------------------------------------------------------

def _full_spectrum(domain, F):
    """Full complex amplitude spectrum indexed by (j1 % Nx, j2 % Ny, j3 % Nz)."""
    return np.fft.fftn(inv(domain, F.coeffs)) / domain.n_points


def _convolution_oracle(domain, F, G, K):
    """Direct convolution restricted to target modes |j_d| <= K.

    O(K^6) triple-loop sum; only viable on small grids, which is the point:
    it shares no code with the FFT-based product.
    """
    cf = _full_spectrum(domain, F)
    cg = _full_spectrum(domain, G)
    N = domain.shape
    rng_k = range(-K, K + 1)
    out = {}
    for j1 in range(0, K + 1):  # half-spectrum: nonnegative j1 only
        for j2 in rng_k:
            for j3 in rng_k:
                s = 0.0 + 0.0j
                for k1 in rng_k:
                    l1 = j1 - k1
                    if abs(l1) > K:
                        continue
                    for k2 in rng_k:
                        l2 = j2 - k2
                        if abs(l2) > K:
                            continue
                        for k3 in rng_k:
                            l3 = j3 - k3
                            if abs(l3) > K:
                                continue
                            s += (
                                cf[k1 % N[0], k2 % N[1], k3 % N[2]]
                                * cg[l1 % N[0], l2 % N[1], l3 % N[2]]
                            )
                out[(j1, j2, j3)] = s
    return out


def test_dealias_product_matches_convolution(rng):
    d = Domain(L=2.0, Nx=12, Ny=12, Nz=12, Re=1.0)
    g = grids(d)
    K = g.Kx
    F = random_band_limited(d, rng, bandwidth=K)
    G = random_band_limited(d, rng, bandwidth=K)
    prod = dealias_product(F, G)
    oracle = _convolution_oracle(d, F, G, K)
    worst = 0.0
    for (j1, j2, j3), expected in oracle.items():
        got = prod.coeffs[j1, j2 % d.Ny, j3 % d.Nz]
        worst = max(worst, abs(got - expected))
    assert worst < 1e-12


def test_dealias_product_kills_out_of_band(domain, rng):
    g = grids(domain)
    F = random_band_limited(domain, rng)
    G = random_band_limited(domain, rng)
    prod = dealias_product(F, G)
    assert np.max(np.abs(np.where(g.dealias_mask, 0.0, prod.coeffs))) == 0.0


def test_dealias_product_commutes(domain, rng):
    F = random_band_limited(domain, rng)
    G = random_band_limited(domain, rng)
    a = dealias_product(F, G)
    b = dealias_product(G, F)
    assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-15


# ---------------------------------------------------------------------------
# Galerkin projection
# ---------------------------------------------------------------------------

def test_projection_idempotent_and_contractive(domain, rng):
    f = random_band_limited(domain, rng)
    for m in (0, 1, 2, 3):
        p = galerkin_project(f, m)
        pp = galerkin_project(p, m)
        assert np.array_equal(p.coeffs, pp.coeffs)
        assert l2_norm(p) <= l2_norm(f) + 1e-15


def test_projection_nesting(domain, rng):
    f = random_band_limited(domain, rng)
    small = galerkin_project(f, 1)
    via_big = galerkin_project(galerkin_project(f, 3), 1)
    assert np.array_equal(small.coeffs, via_big.coeffs)


def test_projection_radius_zero_keeps_mean(domain):
    f = forward_transform(PhysicalField(domain, np.full(domain.shape, 2.0)))
    p = galerkin_project(f, 0)
    assert abs(p.coeffs[0, 0, 0] - 2.0) < 1e-14


# ---------------------------------------------------------------------------
# Parseval
# ---------------------------------------------------------------------------

def test_parseval_matches_quadrature(domain_rect, rng):
    d = domain_rect
    f = random_band_limited(d, rng)
    vals = inverse_transform(f).values
    quad = np.sqrt(np.mean(vals**2) * d.L**2)
    assert abs(l2_norm(f) - quad) < 1e-12 * max(quad, 1.0)


def test_inner_product_matches_quadrature(domain, rng):
    f = random_band_limited(domain, rng)
    g = random_band_limited(domain, rng)
    quad = np.mean(inverse_transform(f).values * inverse_transform(g).values)
    quad *= domain.L**2
    assert abs(l2_inner(f, g) - quad) < 1e-11 * max(abs(quad), 1.0)


def test_grad_norm_consistent_with_components(domain, rng):
    f = random_band_limited(domain, rng, bandwidth=3)
    fx, fy = grad_h(f)
    direct = np.sqrt(l2_norm(fx) ** 2 + l2_norm(fy) ** 2)
    assert abs(grad_h_norm(f) - direct) < 1e-11 * max(direct, 1.0)


def test_weighted_norm_scalar_weight(domain, rng):
    f = random_band_limited(domain, rng)
    assert abs(weighted_norm(f, 4.0) - 2.0 * l2_norm(f)) < 1e-12


# ---------------------------------------------------------------------------
# padded evaluation
# ---------------------------------------------------------------------------

def test_eval_padded_reproduces_trig(domain):
    d = domain
    X, Y, Z = coords(d)
    k = 2.0 * np.pi / d.L
    f = forward_transform(
        PhysicalField(d, np.cos(k * X + 4 * np.pi * Z) * np.sin(2 * k * Y))
    )
    factor = 3
    vals = eval_padded(f, factor)
    x = np.arange(factor * d.Nx) * d.L / (factor * d.Nx)
    y = np.arange(factor * d.Ny) * d.L / (factor * d.Ny)
    z = np.arange(factor * d.Nz) / (factor * d.Nz)
    Xf, Yf, Zf = np.meshgrid(x, y, z, indexing="ij")
    exact = np.cos(k * Xf + 4 * np.pi * Zf) * np.sin(2 * k * Yf)
    assert np.max(np.abs(vals - exact)) < 1e-11


def test_eval_padded_preserves_l2(domain, rng):
    f = random_band_limited(domain, rng)
    vals = eval_padded(f, 2)
    quad = np.sqrt(np.mean(vals**2) * domain.L**2)
    assert abs(quad - l2_norm(f)) < 1e-11 * max(quad, 1.0)


# ---------------------------------------------------------------------------
# random field generator
# ---------------------------------------------------------------------------

def test_random_band_limited_respects_band(domain, rng):
    g = grids(domain)
    f = random_band_limited(domain, rng, bandwidth=2)
    outside = (np.abs(g.jx) > 2) | (np.abs(g.jy) > 2) | (np.abs(g.jz) > 2)
    assert np.max(np.abs(np.where(outside, f.coeffs, 0.0))) == 0.0


def test_random_band_limited_anisotropy(domain, rng):
    g = grids(domain)
    fh = random_band_limited(domain, rng, anisotropy="h_only")
    assert np.max(np.abs(np.where(g.jz != 0, fh.coeffs, 0.0))) == 0.0
    fz = random_band_limited(domain, rng, anisotropy="z_only")
    horizontal = (g.jx != 0) | (g.jy != 0)
    assert np.max(np.abs(np.where(horizontal, fz.coeffs, 0.0))) == 0.0
    with pytest.raises(ValueError):
        random_band_limited(domain, rng, anisotropy="diagonal")


def test_random_band_limited_zero_mean(domain, rng):
    f = random_band_limited(domain, rng, zero_mean_h=True)
    assert np.max(np.abs(f.coeffs[0, 0, :])) == 0.0


def test_random_band_limited_is_real(domain, rng):
    f = random_band_limited(domain, rng, alpha=1.0)
    assert hermitian_defect(domain, f.coeffs) < 1e-14
