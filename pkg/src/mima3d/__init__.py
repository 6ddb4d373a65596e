"""mima3d: pseudo-spectral solver and invariant auditor for a 3D
drift-wave model with horizontal viscosity and weak vertical dissipation."""

__version__ = "0.1.0"

from .domain import Domain, Mode
from .spectral import (
    PhysicalField,
    SpectralField,
    forward_transform,
    inverse_transform,
    grad_h,
    d_dz,
    laplacian_h,
    inv_neg_laplacian_h,
    velocity_from_psi,
    curl_h,
    dealias_product,
    galerkin_project,
    l2_norm,
    l2_inner,
)
from .dynamics import State, DerivedFields, Tendency, LinearSymbol, derive, rhs, linear_symbol, mode_energy
from .stepping import StepperConfig, ExpTable, build_exp_table, step, run
from .diagnostics import DiagnosticsRecord, AuditReport, record
from .config import RunConfig, parse_config, serialize_config, initial_state
from .checkpoint import save_checkpoint, load_checkpoint

__all__ = [
    "Domain", "Mode", "PhysicalField", "SpectralField",
    "forward_transform", "inverse_transform", "grad_h", "d_dz",
    "laplacian_h", "inv_neg_laplacian_h", "velocity_from_psi", "curl_h",
    "dealias_product", "galerkin_project", "l2_norm", "l2_inner",
    "State", "DerivedFields", "Tendency", "LinearSymbol", "derive", "rhs",
    "linear_symbol", "mode_energy",
    "StepperConfig", "ExpTable", "build_exp_table", "step", "run",
    "DiagnosticsRecord", "AuditReport", "record",
    "RunConfig", "parse_config", "serialize_config", "initial_state",
    "save_checkpoint", "load_checkpoint",
]
