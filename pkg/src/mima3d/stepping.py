"""Time integration of the truncated spectral system.

The default scheme is an integrating-factor RK4 (Lawson) that propagates
the per-mode 2x2 linear coupling exactly through closed-form matrix
exponentials; only the dealiased quadratic advection is integrated
numerically. An IMEX Crank-Nicolson/Adams-Bashforth 2 scheme is available
for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .domain import Domain
from .errors import BlowUpError, CFLError
from .dynamics import Forcing, State, linear_symbol_arrays, nonlinear_rhs
from .spectral import SpectralField

SCHEMES = ("if_rk4", "imex_cnab2")

Mat = tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


@dataclass
class StepperConfig:
    dt: float
    t_end: float
    scheme: str = "if_rk4"
    cfl_target: float = 0.5
    galerkin_radius: int | None = None
    linear_only: bool = False

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not (0.0 < self.cfl_target <= 1.0):
            raise ValueError("cfl_target must lie in (0, 1]")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")


def expm_2x2(a: Mat, t: float) -> Mat:
    """Closed-form exp(A*t) for elementwise 2x2 matrices.

    With mu = tr/2 and s^2 = mu^2 - det (eigenvalues mu +- s),
    exp(A t) = C I + S (A - mu I) where C = exp(mu t) cosh(s t) and
    S = exp(mu t) sinh(s t)/s. C and S are assembled from the two
    eigen-exponentials exp((mu +- s) t) directly: for a stable matrix both
    stay bounded, whereas cosh(s t) alone overflows when s t is large. The
    s -> 0 (degenerate-eigenvalue) branch is series-evaluated, and the zero
    matrix maps to the identity.
    """
    a11, a12, a21, a22 = a
    mu = 0.5 * (a11 + a22)
    s = np.sqrt((((a11 - a22) * 0.5) ** 2 + a12 * a21).astype(complex))
    x = s * t
    ep = np.exp((mu + s) * t)
    em = np.exp((mu - s) * t)
    C = 0.5 * (ep + em)
    small = np.abs(x) < 1e-3
    x2 = x * x
    series = np.exp(mu * t) * t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        S = np.where(small, series, (ep - em) / np.where(small, 1.0, 2.0 * s))
    return (
        C + S * (a11 - mu),
        S * a12,
        S * a21,
        C + S * (a22 - mu),
    )


def _matmul(m: Mat, w: np.ndarray, om: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m11, m12, m21, m22 = m
    return m11 * w + m12 * om, m21 * w + m22 * om


@dataclass
class ExpTable:
    """Per-mode linear propagators for one (domain, dt) pair."""

    domain: Domain
    dt: float
    full: Mat
    half: Mat
    # CNAB2 operators: (I - dt/2 A)^{-1} (I + dt/2 A) and (I - dt/2 A)^{-1}
    cn_step: Mat = field(repr=False, default=None)
    cn_inv: Mat = field(repr=False, default=None)


def build_exp_table(domain: Domain, dt: float) -> ExpTable:
    """Precompute exp(A dt), exp(A dt/2) and the CN operators per mode."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    a = linear_symbol_arrays(domain)
    a11, a12, a21, a22 = a

    h = 0.5 * dt
    b11, b12, b21, b22 = 1.0 - h * a11, -h * a12, -h * a21, 1.0 - h * a22
    det = b11 * b22 - b12 * b21
    i11, i12, i21, i22 = b22 / det, -b12 / det, -b21 / det, b11 / det
    p11, p12, p21, p22 = 1.0 + h * a11, h * a12, h * a21, 1.0 + h * a22
    cn_step = (
        i11 * p11 + i12 * p21,
        i11 * p12 + i12 * p22,
        i21 * p11 + i22 * p21,
        i21 * p12 + i22 * p22,
    )
    return ExpTable(
        domain=domain,
        dt=dt,
        full=expm_2x2(a, dt),
        half=expm_2x2(a, 0.5 * dt),
        cn_step=cn_step,
        cn_inv=(i11, i12, i21, i22),
    )


def _check_finite(w: np.ndarray, om: np.ndarray, t: float) -> None:
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(om))):
        raise BlowUpError(f"non-finite coefficients at t={t:.6g}")


class _NonlinearOp:
    """Advection + forcing evaluator bound to one run's configuration."""

    def __init__(self, domain: Domain, config: StepperConfig, forcing: Optional[Forcing]):
        self.domain = domain
        self.config = config
        self.forcing = forcing
        self.last_umax = 0.0
        self.last_vmax = 0.0

    def __call__(self, w, om, t):
        if self.config.linear_only:
            n_w = np.zeros_like(w)
            n_om = np.zeros_like(om)
        else:
            n_w, n_om, umax, vmax = nonlinear_rhs(
                self.domain, w, om, self.config.galerkin_radius
            )
            self.last_umax, self.last_vmax = umax, vmax
        if self.forcing is not None:
            fw, fom = self.forcing(t)
            n_w = n_w + fw
            n_om = n_om + fom
        return n_w, n_om


def _check_cfl(domain: Domain, config: StepperConfig, op: _NonlinearOp, t: float) -> None:
    if config.linear_only:
        return
    dx = domain.L / domain.Nx
    dy = domain.L / domain.Ny
    measured = config.dt * (op.last_umax / dx + op.last_vmax / dy)
    if measured > config.cfl_target:
        raise CFLError(measured, config.cfl_target, t)


def step(
    state: State,
    config: StepperConfig,
    table: ExpTable,
    forcing: Optional[Forcing] = None,
) -> State:
    """Advance the state by one step of the configured scheme."""
    op = _NonlinearOp(state.domain, config, forcing)
    if config.scheme == "if_rk4":
        new = _step_if_rk4(state, config, table, op)
    else:
        new = _step_cnab2(state, config, table, op, prev=None)[0]
    return new


def _step_if_rk4(
    state: State, config: StepperConfig, table: ExpTable, op: _NonlinearOp
) -> State:
    dt = table.dt
    d = state.domain
    t = state.time
    w, om = state.w_hat.coeffs, state.omega_hat.coeffs

    k1w, k1o = op(w, om, t)
    _check_cfl(d, config, op, t)

    ehw, eho = _matmul(table.half, w, om)
    efw, efo = _matmul(table.full, w, om)

    e1w, e1o = _matmul(table.half, k1w, k1o)
    y2w = ehw + 0.5 * dt * e1w
    y2o = eho + 0.5 * dt * e1o
    k2w, k2o = op(y2w, y2o, t + 0.5 * dt)

    y3w = ehw + 0.5 * dt * k2w
    y3o = eho + 0.5 * dt * k2o
    k3w, k3o = op(y3w, y3o, t + 0.5 * dt)

    e3w, e3o = _matmul(table.half, k3w, k3o)
    y4w = efw + dt * e3w
    y4o = efo + dt * e3o
    k4w, k4o = op(y4w, y4o, t + dt)

    e1w, e1o = _matmul(table.full, k1w, k1o)
    e2w, e2o = _matmul(table.half, k2w + k3w, k2o + k3o)
    nw = efw + dt / 6.0 * (e1w + 2.0 * e2w + k4w)
    no = efo + dt / 6.0 * (e1o + 2.0 * e2o + k4o)
    _check_finite(nw, no, t + dt)
    return State(SpectralField(d, nw), SpectralField(d, no), t + dt)


def _step_cnab2(
    state: State,
    config: StepperConfig,
    table: ExpTable,
    op: _NonlinearOp,
    prev: tuple[np.ndarray, np.ndarray] | None,
):
    """One CNAB2 step; bootstraps with N_{-1} = N_0 on the first step."""
    dt = table.dt
    d = state.domain
    t = state.time
    w, om = state.w_hat.coeffs, state.omega_hat.coeffs
    nw, no = op(w, om, t)
    _check_cfl(d, config, op, t)
    pw, po = (nw, no) if prev is None else prev
    gw = 1.5 * nw - 0.5 * pw
    go = 1.5 * no - 0.5 * po
    sw, so = _matmul(table.cn_step, w, om)
    aw, ao = _matmul(table.cn_inv, gw, go)
    new_w = sw + dt * aw
    new_o = so + dt * ao
    _check_finite(new_w, new_o, t + dt)
    new = State(SpectralField(d, new_w), SpectralField(d, new_o), t + dt)
    return new, (nw, no)


@dataclass
class RunResult:
    """Trajectory handle: diagnostics samples and the final state."""

    times: list[float]
    states: Optional[list[State]]
    final: State


def run(
    initial: State,
    config: StepperConfig,
    forcing: Optional[Forcing] = None,
    diag_every: int = 1,
    on_sample: Optional[Callable[[State], None]] = None,
    store_states: bool = False,
) -> RunResult:
    """Advance from the initial state to t_end, sampling every diag_every steps.

    The final step is shortened (with a rebuilt exponential table) so the
    end time lands within one dt of t_end exactly.
    """
    d = initial.domain
    table = build_exp_table(d, config.dt)
    state = initial.copy()
    times = [state.time]
    states: list[State] = [state.copy()] if store_states else []
    if on_sample is not None:
        on_sample(state)

    span = config.t_end - state.time
    if span < 0:
        raise ValueError("t_end precedes the initial time")
    n_full = int(np.floor(span / config.dt + 1e-12))
    remainder = span - n_full * config.dt

    prev_nl: tuple[np.ndarray, np.ndarray] | None = None
    op = _NonlinearOp(d, config, forcing)

    def _advance(st: State, tab: ExpTable) -> State:
        nonlocal prev_nl
        if config.scheme == "if_rk4":
            return _step_if_rk4(st, config, tab, op)
        st2, prev_nl = _step_cnab2(st, config, tab, op, prev_nl)
        return st2

    def _sample(st: State) -> None:
        times.append(st.time)
        if store_states:
            states.append(st.copy())
        if on_sample is not None:
            on_sample(st)

    for i in range(n_full):
        state = _advance(state, table)
        if (i + 1) % diag_every == 0 or (i + 1 == n_full and remainder <= 1e-12 * max(config.dt, 1.0)):
            _sample(state)

    if remainder > 1e-12 * max(config.dt, 1.0):
        tail = build_exp_table(d, remainder)
        tail_cfg = StepperConfig(
            dt=remainder,
            t_end=config.t_end,
            scheme=config.scheme,
            cfl_target=config.cfl_target,
            galerkin_radius=config.galerkin_radius,
            linear_only=config.linear_only,
        )
        if config.scheme == "if_rk4":
            state = _step_if_rk4(state, tail_cfg, tail, op)
        else:
            state, prev_nl = _step_cnab2(state, tail_cfg, tail, op, prev_nl)
        _sample(state)

    return RunResult(times=times, states=states if store_states else None, final=state)
