"""Periodic box, mode bookkeeping, and cached wavenumber grids.

The box is [0, L] x [0, L] x [0, 1]: the vertical period is fixed to one,
so kz = 2*pi*j3 exactly while kx, ky carry the 2*pi/L factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["Domain", "Mode", "grids"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Domain:
    """Physical and discretization parameters of one simulation box."""

    L: float
    Nx: int
    Ny: int
    Nz: int
    Re: float
    eps: float = 0.0
    galerkin_radius: int | None = None

    #: vertical period, fixed by the model formulation
    Lz: float = 1.0

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError(f"L must be positive, got {self.L}")
        for name, n in (("Nx", self.Nx), ("Ny", self.Ny), ("Nz", self.Nz)):
            if n < 4 or n % 2 != 0:
                raise ValueError(f"{name} must be an even integer >= 4, got {n}")
        if self.Lz != 1.0:
            raise ValueError("the vertical period is fixed to 1")
        if self.Re <= 0:
            raise ValueError(f"Re must be positive, got {self.Re}")
        if self.eps < 0:
            raise ValueError(f"eps must be nonnegative, got {self.eps}")
        if self.galerkin_radius is not None and self.galerkin_radius < 0:
            raise ValueError("galerkin_radius must be >= 0")

    @property
    def shape(self) -> tuple[int, int, int]:
        """Collocation-grid shape (Nx, Ny, Nz)."""
        return (self.Nx, self.Ny, self.Nz)

    @property
    def spectral_shape(self) -> tuple[int, int, int]:
        """Half-spectrum coefficient shape (Nx//2+1, Ny, Nz)."""
        return (self.Nx // 2 + 1, self.Ny, self.Nz)

    @property
    def n_points(self) -> int:
        return self.Nx * self.Ny * self.Nz


@dataclass(frozen=True)
class Mode:
    """One Fourier mode index triple with its wavenumbers on a given box."""

    j1: int
    j2: int
    j3: int
    L: float

    @property
    def kx(self) -> float:
        return TWO_PI * self.j1 / self.L

    @property
    def ky(self) -> float:
        return TWO_PI * self.j2 / self.L

    @property
    def kz(self) -> float:
        # vertical period is 1
        return TWO_PI * self.j3

    @property
    def kh2(self) -> float:
        return self.kx**2 + self.ky**2


class _Grids:
    """Precomputed index and wavenumber arrays for one Domain.

    Arrays are broadcast-shaped against the half-spectrum layout
    (Nx//2+1, Ny, Nz); the x axis stores only nonnegative j1.
    Odd-derivative wavenumbers (kxd, kyd, kzd) are zeroed on the Nyquist
    planes so derivatives of real fields stay real.
    """

    def __init__(self, domain: Domain):
        Nx, Ny, Nz = domain.Nx, domain.Ny, domain.Nz
        L = domain.L
        self.domain = domain

        self.jx = np.arange(Nx // 2 + 1).reshape(-1, 1, 1)
        self.jy = np.rint(np.fft.fftfreq(Ny) * Ny).astype(int).reshape(1, -1, 1)
        self.jz = np.rint(np.fft.fftfreq(Nz) * Nz).astype(int).reshape(1, 1, -1)

        self.kx = TWO_PI * self.jx / L
        self.ky = TWO_PI * self.jy / L
        self.kz = TWO_PI * self.jz.astype(float)

        self.kxd = np.where(self.jx == Nx // 2, 0.0, self.kx)
        self.kyd = np.where(self.jy == -(Ny // 2), 0.0, self.ky)
        self.kzd = np.where(self.jz == -(Nz // 2), 0.0, self.kz)

        self.kh2 = self.kx**2 + self.ky**2
        self.mean_h = (self.jx == 0) & (self.jy == 0)
        # safe divisor: 1 where kh2 == 0; always mask those modes explicitly
        self.kh2_safe = np.where(self.mean_h, 1.0, self.kh2)

        # conjugate-pair multiplicity of each stored coefficient
        self.weight = np.where((self.jx == 0) | (self.jx == Nx // 2), 1.0, 2.0)

        self.j2 = self.jx**2 + self.jy**2 + self.jz**2

        # strict 2/3-rule cutoffs: 3*K < N guarantees alias-free quadratics
        # for inputs band-limited to |j| <= K in each direction
        self.Kx = (Nx - 1) // 3
        self.Ky = (Ny - 1) // 3
        self.Kz = (Nz - 1) // 3
        self.dealias_mask = (
            (np.abs(self.jx) <= self.Kx)
            & (np.abs(self.jy) <= self.Ky)
            & (np.abs(self.jz) <= self.Kz)
        )

    def ball_mask(self, m: int) -> np.ndarray:
        """Boolean mask of the Euclidean mode ball |j| <= m."""
        return self.j2 <= m * m


@lru_cache(maxsize=32)
def grids(domain: Domain) -> _Grids:
    """Cached wavenumber grids for a domain (domains are immutable)."""
    return _Grids(domain)
