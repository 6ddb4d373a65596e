"""Shared fixtures for the mima3d test suite."""

import numpy as np
import pytest

from mima3d.domain import Domain


@pytest.fixture
def domain():
    """Small cubic box exercising all code paths (dealiasing, gauge, eps)."""
    return Domain(L=2.0 * np.pi, Nx=12, Ny=12, Nz=12, Re=50.0, eps=0.4)


@pytest.fixture
def domain_rect():
    """Non-cubic grid to catch axis-ordering mistakes."""
    return Domain(L=1.5, Nx=8, Ny=12, Nz=10, Re=10.0, eps=0.2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
