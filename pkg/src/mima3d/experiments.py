"""The two trajectory-level experiments: Galerkin self-convergence and
continuous dependence on initial data."""

from __future__ import annotations

from dataclasses import dataclass, replace as dc_replace

import numpy as np

from .config import RunConfig, initial_state
from .diagnostics import record
from .domain import Domain, grids
from .dynamics import State
from .spectral import SpectralField, galerkin_project, random_band_limited, weighted_norm
from .stepping import StepperConfig, run


@dataclass
class ConvergenceRow:
    m: int
    m_next: int
    diff_w: float
    diff_u: float


def _stepper(cfg: RunConfig, galerkin_radius: int | None = None) -> StepperConfig:
    return StepperConfig(
        dt=cfg.dt,
        t_end=cfg.t_end,
        scheme=cfg.scheme,
        cfl_target=cfg.cfl_target,
        galerkin_radius=galerkin_radius,
    )


def galerkin_convergence(cfg: RunConfig, m_list: list[int] | None = None) -> list[ConvergenceRow]:
    """Run identical initial data under increasing ball truncations.

    All truncations share one grid, so states are compared coefficientwise;
    reported differences are ||w_m - w_{2m}|| and ||u_m - u_{2m}|| at t_end.
    """
    ms = sorted(m_list if m_list is not None else cfg.convergence_m)
    domain = cfg.domain()
    g = grids(domain)
    if max(ms) > min(g.Kx, g.Ky, g.Kz):
        raise ValueError(
            f"largest radius {max(ms)} exceeds the alias-free cutoff of the grid"
        )
    base = initial_state(dc_replace(cfg, galerkin_radius=None), domain)
    finals: dict[int, State] = {}
    for m in ms:
        init = State(
            galerkin_project(base.w_hat, m),
            galerkin_project(base.omega_hat, m),
            base.time,
        )
        finals[m] = run(init, _stepper(cfg, galerkin_radius=m)).final

    inv_kh2 = np.where(g.mean_h, 0.0, 1.0 / g.kh2_safe)
    rows = []
    for a, b in zip(ms[:-1], ms[1:]):
        dw = SpectralField(domain, finals[a].w_hat.coeffs - finals[b].w_hat.coeffs)
        do = SpectralField(domain, finals[a].omega_hat.coeffs - finals[b].omega_hat.coeffs)
        rows.append(
            ConvergenceRow(
                m=a,
                m_next=b,
                diff_w=weighted_norm(dw),
                diff_u=weighted_norm(do, inv_kh2),
            )
        )
    return rows


def check_spectral_decay(rows: list[ConvergenceRow], factor: float = 10.0, floor: float = 1e-10) -> bool:
    """Successive differences must shrink by >= factor per doubling until the floor."""
    for prev, nxt in zip(rows[:-1], rows[1:]):
        p = prev.diff_w + prev.diff_u
        n = nxt.diff_w + nxt.diff_u
        if p <= floor or n <= floor:
            continue
        if n > p / factor:
            return False
    return True


@dataclass
class ContinuousDependenceResult:
    delta: float
    times: np.ndarray
    d: np.ndarray  # ||w1-w2||^2 + ||u1-u2||^2 at each sample
    rate: float  # fitted slope of log(d/d0) against t
    intercept: float


def _difference_series(domain: Domain, states_a, states_b) -> np.ndarray:
    g = grids(domain)
    inv_kh2 = np.where(g.mean_h, 0.0, 1.0 / g.kh2_safe)
    out = []
    for sa, sb in zip(states_a, states_b):
        dw = SpectralField(domain, sa.w_hat.coeffs - sb.w_hat.coeffs)
        do = SpectralField(domain, sa.omega_hat.coeffs - sb.omega_hat.coeffs)
        out.append(weighted_norm(dw) ** 2 + weighted_norm(do, inv_kh2) ** 2)
    return np.array(out)


def continuous_dependence(
    cfg: RunConfig, deltas: list[float] | None = None, diag_every: int = 10
) -> list[ContinuousDependenceResult]:
    """Perturb the initial state by scaled copies of one fixed direction and
    record how the solution difference grows.

    The Gronwall picture predicts at most exponential growth with a rate
    that is independent of the perturbation amplitude in the linear regime.
    """
    amps = list(deltas if deltas is not None else cfg.cd_deltas)
    domain = cfg.domain()
    base = initial_state(cfg, domain)
    rng = np.random.default_rng(cfg.seed + 777)
    dir_w = random_band_limited(domain, rng, alpha=2.0, zero_mean_h=True)
    dir_om = random_band_limited(domain, rng, alpha=2.0, zero_mean_h=True)
    nw = weighted_norm(dir_w)
    no = weighted_norm(dir_om)
    dw = dir_w.coeffs / (nw if nw > 0 else 1.0)
    dom = dir_om.coeffs / (no if no > 0 else 1.0)

    sc = _stepper(cfg, galerkin_radius=cfg.galerkin_radius)
    ref = run(base, sc, diag_every=diag_every, store_states=True)

    results = []
    for amp in amps:
        pert = State(
            SpectralField(domain, base.w_hat.coeffs + amp * dw),
            SpectralField(domain, base.omega_hat.coeffs + amp * dom),
            base.time,
        )
        res = run(pert, sc, diag_every=diag_every, store_states=True)
        d = _difference_series(domain, ref.states, res.states)
        t = np.array(ref.times)
        if amp == 0.0 or d[0] == 0.0:
            rate, intercept = 0.0, 0.0
        else:
            y = np.log(d / d[0])
            rate, intercept = np.polyfit(t, y, 1)
        results.append(
            ContinuousDependenceResult(
                delta=amp, times=t, d=d, rate=float(rate), intercept=float(intercept)
            )
        )
    return results


def rates_consistent(results: list[ContinuousDependenceResult], rel_tol: float = 0.10) -> bool:
    """Fitted growth rates of all nonzero perturbations agree within rel_tol."""
    rates = [r.rate for r in results if r.delta > 0.0]
    if len(rates) < 2:
        return True
    mean = float(np.mean(rates))
    scale = max(abs(mean), 1e-12)
    return all(abs(r - mean) <= rel_tol * scale for r in rates)


def gronwall_bounded(result: ContinuousDependenceResult, slack: float = 0.1) -> bool:
    """log(d(t)/d(0)) <= rate*t + slack at every sample."""
    if result.d[0] == 0.0:
        return bool(np.all(result.d == 0.0))
    y = np.log(result.d / result.d[0])
    return bool(np.all(y <= result.rate * result.times + slack))
