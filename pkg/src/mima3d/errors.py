"""Exception types shared across the package."""


class Mima3dError(Exception):
    """Base class for all package errors."""


class HermitianSymmetryError(Mima3dError):
    """Spectral coefficients are not conjugate-symmetric within tolerance."""


class GaugeError(Mima3dError):
    """Nonzero horizontal-mean content where the zero-mean gauge is required."""


class ShapeError(Mima3dError):
    """Field array shape does not match its domain."""


class BlowUpError(Mima3dError):
    """Non-finite values detected in the state or tendency."""


class CFLError(Mima3dError):
    """Measured advective CFL number exceeds the configured target."""

    def __init__(self, measured: float, target: float, time: float):
        self.measured = measured
        self.target = target
        self.time = time
        super().__init__(
            f"CFL violation at t={time:.6g}: measured {measured:.4g} > target {target:.4g}"
        )


class ConfigError(Mima3dError):
    """Invalid or unparseable run configuration."""


class CheckpointError(Mima3dError):
    """Invalid, truncated, or incompatible checkpoint file."""
