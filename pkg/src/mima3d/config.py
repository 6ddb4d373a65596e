"""Run configuration: flat key=value text, named initial profiles.

The format is deliberately minimal: one `key = value` per line, '#'
comments, optional cosmetic `[section]` headers (ignored for namespacing).
parse -> serialize -> parse is the identity.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np

from .domain import Domain, grids
from .dynamics import State
from .errors import ConfigError
from .spectral import (
    SpectralField,
    galerkin_project,
    random_band_limited,
    weighted_norm,
)

_PROFILE_RE = re.compile(r"^([a-z_0-9]+)\s*(?:\((.*)\))?$")


@dataclass
class RunConfig:
    """Complete description of one run (domain + stepper + IC + outputs)."""

    nx: int = 16
    ny: int = 16
    nz: int = 16
    length: float = 2.0 * math.pi
    re: float = 100.0
    eps: float = 0.5
    galerkin_radius: int | None = None
    dt: float = 1e-3
    t_end: float = 1.0
    scheme: str = "if_rk4"
    cfl_target: float = 0.5
    initial: str = "random_smooth(2.0)"
    amplitude: float = 1.0
    seed: int = 0
    diag_every: int = 1
    output_dir: str = "out"
    convergence_m: tuple[int, ...] = (4, 8, 16)
    cd_deltas: tuple[float, ...] = (1e-8, 1e-7, 1e-6)
    ineq_n: int = 10000
    ineq_grid: int = 12

    def domain(self) -> Domain:
        return Domain(
            L=self.length,
            Nx=self.nx,
            Ny=self.ny,
            Nz=self.nz,
            Re=self.re,
            eps=self.eps,
            galerkin_radius=self.galerkin_radius,
        )

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=seed)


_INT_KEYS = {"nx", "ny", "nz", "seed", "diag_every", "ineq_n", "ineq_grid"}
_FLOAT_KEYS = {"length", "re", "eps", "dt", "t_end", "cfl_target", "amplitude"}
_STR_KEYS = {"scheme", "initial", "output_dir"}
_OPT_INT_KEYS = {"galerkin_radius"}
_INT_LIST_KEYS = {"convergence_m"}
_FLOAT_LIST_KEYS = {"cd_deltas"}
_ALL_KEYS = (
    _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _OPT_INT_KEYS | _INT_LIST_KEYS | _FLOAT_LIST_KEYS
)

_REQUIRED_KEYS = {"nx", "ny", "nz", "length", "re", "eps", "dt", "t_end"}


def parse_config(text: str) -> RunConfig:
    """Parse key=value text into a validated RunConfig.

    Errors carry the offending line number; unknown and missing required
    keys are rejected.
    """
    values: dict = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            continue  # cosmetic grouping only
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        try:
            if key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _OPT_INT_KEYS:
                values[key] = None if val in ("", "none") else int(val)
            elif key in _INT_LIST_KEYS:
                values[key] = tuple(int(v) for v in val.split(",") if v.strip())
            elif key in _FLOAT_LIST_KEYS:
                values[key] = tuple(float(v) for v in val.split(",") if v.strip())
            else:
                values[key] = val
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None

    missing = _REQUIRED_KEYS - seen
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(sorted(missing))}")

    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    for name, n in (("nx", cfg.nx), ("ny", cfg.ny), ("nz", cfg.nz)):
        if n < 4 or n % 2 != 0:
            raise ConfigError(f"{name} must be an even integer >= 4, got {n}")
    if cfg.length <= 0:
        raise ConfigError("length must be positive")
    if cfg.re <= 0:
        raise ConfigError("re must be positive")
    if cfg.eps < 0:
        raise ConfigError("eps must be nonnegative")
    if cfg.dt <= 0:
        raise ConfigError("dt must be positive")
    if not (0 < cfg.cfl_target <= 1):
        raise ConfigError("cfl_target must lie in (0, 1]")
    if cfg.scheme not in ("if_rk4", "imex_cnab2"):
        raise ConfigError(f"unknown scheme {cfg.scheme!r}")
    if cfg.diag_every < 1:
        raise ConfigError("diag_every must be >= 1")
    if not cfg.initial.startswith("checkpoint:"):
        parse_profile(cfg.initial)  # raises on malformed profile strings


def serialize_config(cfg: RunConfig) -> str:
    """Render a RunConfig as parseable key=value text with all defaults explicit."""
    gal = "" if cfg.galerkin_radius is None else str(cfg.galerkin_radius)
    lines = [
        "[domain]",
        f"nx = {cfg.nx}",
        f"ny = {cfg.ny}",
        f"nz = {cfg.nz}",
        f"length = {cfg.length!r}",
        f"re = {cfg.re!r}",
        f"eps = {cfg.eps!r}",
        f"galerkin_radius = {gal}",
        "",
        "[stepper]",
        f"dt = {cfg.dt!r}",
        f"t_end = {cfg.t_end!r}",
        f"scheme = {cfg.scheme}",
        f"cfl_target = {cfg.cfl_target!r}",
        "",
        "[initial]",
        f"initial = {cfg.initial}",
        f"amplitude = {cfg.amplitude!r}",
        f"seed = {cfg.seed}",
        "",
        "[output]",
        f"diag_every = {cfg.diag_every}",
        f"output_dir = {cfg.output_dir}",
        "",
        "[experiments]",
        f"convergence_m = {','.join(str(m) for m in cfg.convergence_m)}",
        f"cd_deltas = {','.join(repr(d) for d in cfg.cd_deltas)}",
        f"ineq_n = {cfg.ineq_n}",
        f"ineq_grid = {cfg.ineq_grid}",
    ]
    return "\n".join(lines) + "\n"


def parse_profile(text: str) -> tuple[str, tuple[float, ...]]:
    """Split 'name(a,b,...)' into (name, args)."""
    m = _PROFILE_RE.match(text.strip())
    if not m:
        raise ConfigError(f"malformed initial profile {text!r}")
    name, argtext = m.group(1), m.group(2)
    args = ()
    if argtext:
        try:
            args = tuple(float(a) for a in argtext.split(","))
        except ValueError:
            raise ConfigError(f"non-numeric argument in profile {text!r}") from None
    known = {"single_mode", "taylor_green_h", "random_smooth", "random_analytic", "zero"}
    if name not in known:
        raise ConfigError(f"unknown initial profile {name!r}")
    return name, args


def _set_cos_mode(coeffs: np.ndarray, domain: Domain, j: tuple[int, int, int], amp: float):
    """Add amp*cos(2*pi*(j1 x + j2 y)/L + 2*pi j3 z) in half-spectrum storage."""
    j1, j2, j3 = j
    if j1 < 0:
        j1, j2, j3 = -j1, -j2, -j3
    iy = j2 % domain.Ny
    iz = j3 % domain.Nz
    if j1 > 0:
        coeffs[j1, iy, iz] += amp / 2.0
    else:
        coeffs[0, iy, iz] += amp / 2.0
        coeffs[0, (-j2) % domain.Ny, (-j3) % domain.Nz] += amp / 2.0


def initial_state(cfg: RunConfig, domain: Domain | None = None) -> State:
    """Build the initial (w_hat, omega_hat) pair for a config.

    Checkpoint-based initial conditions are handled by the CLI, not here.
    """
    if cfg.initial.startswith("checkpoint:"):
        raise ConfigError("checkpoint initial conditions are resolved by the caller")
    if domain is None:
        domain = cfg.domain()
    name, args = parse_profile(cfg.initial)
    g = grids(domain)
    w = np.zeros(domain.spectral_shape, dtype=complex)
    om = np.zeros(domain.spectral_shape, dtype=complex)
    amp = cfg.amplitude

    if name == "zero":
        pass
    elif name == "single_mode":
        if len(args) != 3:
            raise ConfigError("single_mode takes exactly (j1, j2, j3)")
        j = tuple(int(a) for a in args)
        if j[0] == 0 and j[1] == 0:
            raise ConfigError("single_mode requires a nonzero horizontal wavevector")
        _set_cos_mode(w, domain, j, amp)
        _set_cos_mode(om, domain, j, amp)
    elif name == "taylor_green_h":
        # psi = A sin(kx x) sin(ky y) cos(2 pi z); w = A cos(kx x) cos(ky y) sin(2 pi z)
        from .spectral import fwd

        k = 2.0 * math.pi / domain.L
        x = np.arange(domain.Nx) * domain.L / domain.Nx
        y = np.arange(domain.Ny) * domain.L / domain.Ny
        z = np.arange(domain.Nz) / domain.Nz
        X, Y, Z = np.meshgrid(x, y, z, indexing="ij")
        om_phys = amp * 2.0 * k**2 * np.sin(k * X) * np.sin(k * Y) * np.cos(2 * math.pi * Z)
        w_phys = amp * np.cos(k * X) * np.cos(k * Y) * np.sin(2 * math.pi * Z)
        om = fwd(domain, om_phys)
        w = fwd(domain, w_phys)
        om[0, 0, :] = 0.0
    elif name in ("random_smooth", "random_analytic"):
        rng = np.random.default_rng(cfg.seed)
        if name == "random_smooth":
            # Band-limited by default: free high-kz/low-kh modes decay on
            # eps^2 kz^2/kh^2 time scales that sampled quadrature of the
            # dissipation rate cannot resolve.
            alpha = args[0] if args else 2.0
            bw = int(args[1]) if len(args) > 1 else 4
            kw = dict(alpha=alpha, bandwidth=bw)
        else:
            rate = args[0] if args else 1.0
            kw = dict(exp_rate=rate)
        wf = random_band_limited(domain, rng, zero_mean_h=True, **kw)
        of = random_band_limited(domain, rng, zero_mean_h=True, **kw)
        nw = weighted_norm(wf)
        no_u = weighted_norm(of, np.where(g.mean_h, 0.0, 1.0 / g.kh2_safe))
        w = wf.coeffs * (amp / nw if nw > 0 else 0.0)
        om = of.coeffs * (amp / no_u if no_u > 0 else 0.0)
    else:  # pragma: no cover - parse_profile already rejects unknowns
        raise ConfigError(f"unknown initial profile {name!r}")

    state = State(SpectralField(domain, w), SpectralField(domain, om), time=0.0)
    if domain.galerkin_radius is not None:
        state = State(
            galerkin_project(state.w_hat, domain.galerkin_radius),
            galerkin_project(state.omega_hat, domain.galerkin_radius),
            state.time,
        )
    return state
