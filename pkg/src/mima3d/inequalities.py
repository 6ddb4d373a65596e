"""Numerical verification of the anisotropic trilinear inequality chain.

Each check evaluates the left side by oversampled collocation quadrature
(absolute values break band-limitation, so the integrals are approximate
but controlled) and the right side from spectral-exact norms with the
unknown constant dropped; the reported ratio lhs/rhs is an empirical lower
bound on the best constant. Constants are reported, never asserted against
reference values.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .domain import Domain, grids
from .spectral import (
    SpectralField,
    eval_padded,
    random_band_limited,
    weighted_norm,
)

__all__ = [
    "RandomFieldSpec",
    "InequalityResult",
    "ConstantFit",
    "check_lemma_trilinear",
    "check_ladyzhenskaya",
    "check_agmon_1d",
    "check_linfty_z",
    "check_mixed_l4",
    "fit_constant",
    "run_trilinear_sweep",
]

ANISOTROPIES = ("iso", "h_only", "z_only")


@dataclass(frozen=True)
class RandomFieldSpec:
    """Sampling recipe for one random band-limited field."""

    bandwidth: tuple[int, int, int]
    alpha: float
    seed: int
    anisotropy: str = "iso"

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("spectral decay exponent must be >= 0")
        if self.anisotropy not in ANISOTROPIES:
            raise ValueError(f"anisotropy must be one of {ANISOTROPIES}")

    def sample(self, domain: Domain) -> SpectralField:
        g = grids(domain)
        if max(self.bandwidth) > min(g.Kx, g.Ky, g.Kz):
            raise ValueError(
                f"bandwidth {self.bandwidth} exceeds the alias-free cutoff "
                f"of a {domain.shape} grid"
            )
        rng = np.random.default_rng(self.seed)
        return random_band_limited(
            domain,
            rng,
            bandwidth=self.bandwidth,
            alpha=self.alpha,
            anisotropy=self.anisotropy,
        )


@dataclass
class InequalityResult:
    """lhs, constant-free rhs, and their ratio for one sampled case."""

    name: str
    lhs: float
    rhs: float
    ratio: float
    factors: dict
    spec: RandomFieldSpec | None = None


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        if lhs > 1e-14:
            raise RuntimeError(
                "zero right-hand side with nonzero integral: quadrature bug"
            )
        return 0.0
    return lhs / rhs


def _norms(F: SpectralField) -> tuple[float, float, float]:
    """(||f||, ||grad_h f||, ||f_z||)."""
    g = grids(F.domain)
    return (
        weighted_norm(F),
        weighted_norm(F, g.kh2),
        weighted_norm(F, g.kz**2),
    )


def check_lemma_trilinear(
    f: SpectralField, g: SpectralField, h: SpectralField, factor: int = 2
) -> InequalityResult:
    """Trilinear anisotropic bound:

    int |fgh| <= C (||f||+||grad_h f||)^{1/2} (||f||+||f_z||)^{1/2}
                   ||g||^{1/2} (||g||+||grad_h g||)^{1/2} ||h||.
    """
    domain = f.domain
    fv = eval_padded(f, factor)
    gv = eval_padded(g, factor)
    hv = eval_padded(h, factor)
    lhs = float(np.mean(np.abs(fv * gv * hv)) * domain.L**2)

    nf, nfh, nfz = _norms(f)
    ng, ngh, _ = _norms(g)
    nh, _, _ = _norms(h)
    rhs = (
        np.sqrt(nf + nfh) * np.sqrt(nf + nfz) * np.sqrt(ng) * np.sqrt(ng + ngh) * nh
    )
    return InequalityResult(
        name="lemma_trilinear",
        lhs=lhs,
        rhs=float(rhs),
        ratio=_ratio(lhs, float(rhs)),
        factors={
            "norm_f": nf,
            "norm_grad_h_f": nfh,
            "norm_f_z": nfz,
            "norm_g": ng,
            "norm_grad_h_g": ngh,
            "norm_h": nh,
        },
    )


def check_ladyzhenskaya(f: SpectralField, p: float, factor: int = 2) -> InequalityResult:
    """Anisotropic Lp interpolation bound for p in [2, 6]:

    ||f||_p <= C_p ||f||_2^{(6-p)/2p} prod_{d in x,y,z} (||f||+||f_d||)^{(p-2)/2p}.
    """
    if not 2.0 <= p <= 6.0:
        raise ValueError("p must lie in [2, 6]")
    domain = f.domain
    gr = grids(domain)
    fv = eval_padded(f, 2 if factor < 2 else factor)
    lhs = float((np.mean(np.abs(fv) ** p) * domain.L**2) ** (1.0 / p))

    n2 = weighted_norm(f)
    nx = weighted_norm(f, gr.kx**2)
    ny = weighted_norm(f, gr.ky**2)
    nz = weighted_norm(f, gr.kz**2)
    e2 = (6.0 - p) / (2.0 * p)
    ed = (p - 2.0) / (2.0 * p)
    rhs = n2**e2 * (n2 + nx) ** ed * (n2 + ny) ** ed * (n2 + nz) ** ed
    return InequalityResult(
        name="ladyzhenskaya",
        lhs=lhs,
        rhs=float(rhs),
        ratio=_ratio(lhs, float(rhs)),
        factors={"p": p, "norm_2": n2, "norm_dx": nx, "norm_dy": ny, "norm_dz": nz},
    )


def check_agmon_1d(samples: np.ndarray, L: float, refine: int = 8) -> InequalityResult:
    """1D sup-norm interpolation: ||phi||_inf <= C ||phi||_2^{1/2} ||phi||_H1^{1/2}.

    samples are uniform periodic collocation values on [0, L); the sup is
    taken on a grid refined by zero-padding.
    """
    n = len(samples)
    c = np.fft.rfft(samples) / n
    big = np.zeros(refine * n // 2 + 1, dtype=complex)
    big[: len(c)] = c
    if n % 2 == 0 and refine > 1:
        big[n // 2] *= 0.5  # split the Nyquist amplitude on the finer grid
    fine = np.fft.irfft(big * (refine * n), n=refine * n)
    lhs = float(np.max(np.abs(fine)))

    k = 2.0 * np.pi * np.arange(len(c)) / L
    w = np.ones(len(c))
    w[1:] = 2.0
    if n % 2 == 0:
        w[-1] = 1.0
    norm2_sq = float(L * np.sum(w * np.abs(c) ** 2))
    h1_sq = norm2_sq + float(L * np.sum(w * k**2 * np.abs(c) ** 2))
    rhs = norm2_sq**0.25 * h1_sq**0.25
    return InequalityResult(
        name="agmon_1d",
        lhs=lhs,
        rhs=float(rhs),
        ratio=_ratio(lhs, float(rhs)),
        factors={"norm_2": np.sqrt(norm2_sq), "norm_h1": np.sqrt(h1_sq)},
    )


def _column_lp_z(values: np.ndarray, p: float) -> np.ndarray:
    """||.||_{L^p_z} per (x, y) column; the z grid spans [0, 1)."""
    return (np.mean(np.abs(values) ** p, axis=2)) ** (1.0 / p)


def check_linfty_z(f: SpectralField, factor: int = 2) -> InequalityResult:
    """Columnwise vertical sup bound (worst column reported):

    ||f||_{Linf_z} <= C ||f||_{L6_z}^{3/4} ||f_z||_{L2_z}^{1/4} + ||f||_{L4_z}.
    """
    g = grids(f.domain)
    fz = SpectralField(f.domain, 1j * g.kzd * f.coeffs)
    fv = eval_padded(f, factor)
    fzv = eval_padded(fz, factor)

    linf = np.max(np.abs(fv), axis=2)
    l6 = _column_lp_z(fv, 6.0)
    l4 = _column_lp_z(fv, 4.0)
    l2z = _column_lp_z(fzv, 2.0)
    rhs_cols = l6**0.75 * l2z**0.25 + l4
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = np.where(rhs_cols > 0.0, linf / np.where(rhs_cols == 0, 1, rhs_cols), 0.0)
    i = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    return InequalityResult(
        name="linfty_z",
        lhs=float(linf[i]),
        rhs=float(rhs_cols[i]),
        ratio=float(ratios[i]),
        factors={"worst_column": (int(i[0]), int(i[1]))},
    )


def check_mixed_l4(g_field: SpectralField, factor: int = 2) -> InequalityResult:
    """Mixed-norm bound:

    int (||g||_{L2_z}^2)^2 dx dy <= C ||g||_2^2 (||g||_2^2 + ||grad_h g||_2^2).
    """
    domain = g_field.domain
    gv = eval_padded(g_field, factor)
    col_sq = np.mean(gv**2, axis=2)  # int_0^1 g^2 dz per column
    lhs = float(np.mean(col_sq**2) * domain.L**2)
    n2, nh, _ = _norms(g_field)
    rhs = n2**2 * (n2**2 + nh**2)
    return InequalityResult(
        name="mixed_l4",
        lhs=lhs,
        rhs=float(rhs),
        ratio=_ratio(lhs, float(rhs)),
        factors={"norm_2": n2, "norm_grad_h": nh},
    )


@dataclass
class ConstantFit:
    """Empirical constant summary over a sweep of inequality results."""

    name: str
    n: int
    max_ratio: float
    median_ratio: float
    p99_ratio: float


def fit_constant(results: Sequence[InequalityResult]) -> ConstantFit:
    """Max ratio over a sweep plus distribution summary (median, p99)."""
    if not results:
        raise ValueError("cannot fit a constant from an empty sweep")
    ratios = sorted(r.ratio for r in results)
    p99 = ratios[min(len(ratios) - 1, int(np.ceil(0.99 * len(ratios))) - 1)]
    return ConstantFit(
        name=results[0].name,
        n=len(ratios),
        max_ratio=max(ratios),
        median_ratio=statistics.median(ratios),
        p99_ratio=p99,
    )


def sweep_specs(
    campaign_seed: int,
    n: int,
    max_bandwidth: int,
    alphas: Sequence[float] = (0.0, 1.0, 2.0),
) -> list[tuple[RandomFieldSpec, RandomFieldSpec, RandomFieldSpec]]:
    """Deterministic field-spec triples derived from a single campaign seed."""
    root = np.random.SeedSequence(campaign_seed)
    children = root.spawn(n)
    triples = []
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        seeds = rng.integers(0, 2**63 - 1, size=3)
        specs = []
        for s in seeds:
            bw = int(rng.integers(1, max_bandwidth + 1))
            alpha = float(alphas[int(rng.integers(0, len(alphas)))])
            aniso = ANISOTROPIES[int(rng.integers(0, len(ANISOTROPIES)))]
            specs.append(
                RandomFieldSpec(
                    bandwidth=(bw, bw, bw), alpha=alpha, seed=int(s), anisotropy=aniso
                )
            )
        triples.append(tuple(specs))
    return triples


def run_trilinear_sweep(
    domain: Domain, campaign_seed: int, n: int
) -> list[InequalityResult]:
    """Evaluate the trilinear bound on n seeded random triples.

    Results are produced in spec order, so the sweep is reproducible
    bit-for-bit for a fixed campaign seed.
    """
    g = grids(domain)
    triples = sweep_specs(campaign_seed, n, max_bandwidth=min(g.Kx, g.Ky, g.Kz))
    results = []
    for sf, sg, sh in triples:
        res = check_lemma_trilinear(
            sf.sample(domain), sg.sample(domain), sh.sample(domain)
        )
        res.spec = sf
        results.append(res)
    return results
