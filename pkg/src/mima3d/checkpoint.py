"""Binary state checkpoints with a bit-exact round trip.

Layout (little-endian):
  magic   8 bytes  b"MIMA3D1\\n"
  version uint32   currently 1
  Nx, Ny, Nz       int32 each
  L, Re, eps, time float64 each
  w_hat     complex128 array, C order, shape (Nx//2+1, Ny, Nz)
  omega_hat complex128 array, C order, same shape
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .domain import Domain
from .dynamics import State
from .errors import CheckpointError
from .spectral import SpectralField

MAGIC = b"MIMA3D1\n"
VERSION = 1
_HEADER = struct.Struct("<8sI3i4d")


def save_checkpoint(state: State, path: str | Path) -> None:
    d = state.domain
    header = _HEADER.pack(
        MAGIC, VERSION, d.Nx, d.Ny, d.Nz, d.L, d.Re, d.eps, state.time
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(state.w_hat.coeffs, dtype=np.complex128).tobytes())
        fh.write(
            np.ascontiguousarray(state.omega_hat.coeffs, dtype=np.complex128).tobytes()
        )


def load_checkpoint(path: str | Path, expected: Domain | None = None) -> State:
    """Load a state; validates magic, version, and array sizes.

    When `expected` is given, its grid and parameters must match the header.
    """
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise CheckpointError(f"{path}: truncated header")
    magic, version, nx, ny, nz, L, Re, eps, time = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CheckpointError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CheckpointError(
            f"{path}: unsupported checkpoint version {version} (supported: {VERSION})"
        )
    domain = Domain(L=L, Nx=nx, Ny=ny, Nz=nz, Re=Re, eps=eps)
    if expected is not None:
        if (nx, ny, nz) != expected.shape:
            raise CheckpointError(
                f"{path}: grid {(nx, ny, nz)} does not match configured {expected.shape}"
            )
        if (L, Re, eps) != (expected.L, expected.Re, expected.eps):
            raise CheckpointError(
                f"{path}: parameters (L, Re, eps)=({L}, {Re}, {eps}) do not match config"
            )
        domain = expected
    n = (nx // 2 + 1) * ny * nz
    body = raw[_HEADER.size:]
    expected_bytes = 2 * n * 16
    if len(body) != expected_bytes:
        raise CheckpointError(
            f"{path}: body has {len(body)} bytes, expected {expected_bytes}"
        )
    arr = np.frombuffer(body, dtype=np.complex128)
    shape = (nx // 2 + 1, ny, nz)
    w = arr[:n].reshape(shape).copy()
    om = arr[n:].reshape(shape).copy()
    return State(SpectralField(domain, w), SpectralField(domain, om), time=time)
