"""Command-line surface.

Subcommands: run, convergence, continuous-dependence, audit, inequalities,
info. Exit codes: 0 success, 1 usage error, 2 numerical failure (blow-up
or CFL), 3 audit failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace as dc_replace
from pathlib import Path

import numpy as np

from . import __version__
from .checkpoint import load_checkpoint, save_checkpoint
from .config import RunConfig, initial_state, parse_config, serialize_config
from .csvio import read_csv, write_csv
from .diagnostics import (
    CSV_COLUMNS,
    DiagnosticsRecord,
    accumulate_dissipation,
    audit_energy_equality,
    audit_enstrophy_inequality,
    audit_h1_boundedness,
    energy_residuals,
    enstrophy_series,
    record,
)
from .errors import BlowUpError, CFLError, CheckpointError, ConfigError, Mima3dError
from .experiments import (
    check_spectral_decay,
    continuous_dependence,
    galerkin_convergence,
    gronwall_bounded,
    rates_consistent,
)
from .inequalities import fit_constant, run_trilinear_sweep
from .domain import Domain
from .stepping import StepperConfig, run

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_AUDIT = 3


def _load_config(args) -> RunConfig:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    cfg = parse_config(text)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    if args.output is not None:
        cfg = dc_replace(cfg, output_dir=args.output)
    return cfg


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _initial(cfg: RunConfig):
    if cfg.initial.startswith("checkpoint:"):
        from .dynamics import State
        from .spectral import galerkin_project

        path = cfg.initial.split(":", 1)[1]
        state = load_checkpoint(path, expected=cfg.domain())
        if cfg.galerkin_radius is not None:
            state = State(
                galerkin_project(state.w_hat, cfg.galerkin_radius),
                galerkin_project(state.omega_hat, cfg.galerkin_radius),
                state.time,
            )
        return state
    return initial_state(cfg)


def _simulate(cfg: RunConfig):
    """Run the configured trajectory; returns (records, final_state)."""
    sc = StepperConfig(
        dt=cfg.dt,
        t_end=cfg.t_end,
        scheme=cfg.scheme,
        cfl_target=cfg.cfl_target,
        galerkin_radius=cfg.galerkin_radius,
    )
    records: list[DiagnosticsRecord] = []
    result = run(
        _initial(cfg), sc, diag_every=cfg.diag_every,
        on_sample=lambda st: records.append(record(st)),
    )
    accumulate_dissipation(records, cfg.re, cfg.eps)
    return records, result.final


def _write_diagnostics(path: Path, records) -> None:
    res = energy_residuals(records)
    rows = [
        [
            r.t, r.norm_w, r.norm_u, r.norm_grad_h_w, r.norm_grad_h_u,
            r.norm_psi_z, r.norm_omega, r.norm_grad_h_omega, r.norm_u_z,
            r.norm_w_z, r.norm_grad_h_w_z, r.norm_omega_z, r.norm_psi_zz,
            r.norm_lap_h_w, r.d_visc, r.d_eps, r.energy(), float(res[i]),
        ]
        for i, r in enumerate(records)
    ]
    write_csv(path, "diagnostics", CSV_COLUMNS, rows)


def _records_from_csv(path: Path) -> list[DiagnosticsRecord]:
    cols, rows = read_csv(path, "diagnostics")
    records = []
    for row in rows:
        values = dict(zip(cols, row))
        values.pop("energy", None)
        values.pop("energy_residual", None)
        records.append(DiagnosticsRecord(**values))
    return records


def _run_audits(records, cfg: RunConfig):
    reports = [audit_energy_equality(records)]
    if cfg.eps > 0 and len(records) >= 3:
        reports.append(audit_enstrophy_inequality(records, cfg.re, cfg.eps))
    reports.append(audit_h1_boundedness(records))
    return reports


def _write_audit(path: Path, reports) -> None:
    write_csv(
        path,
        "audit",
        ["check", "max_residual", "tolerance", "passed", "t_worst", "details"],
        [[r.name, r.max_residual, r.tolerance, r.passed, r.t_worst, r.details] for r in reports],
    )


def cmd_run(args) -> int:
    cfg = _load_config(args)
    out = _outdir(cfg)
    records, final = _simulate(cfg)
    _write_diagnostics(out / "diagnostics.csv", records)
    save_checkpoint(final, out / "final.ckpt")
    if args.strict:
        reports = _run_audits(records, cfg)
        _write_audit(out / "audit_report.csv", reports)
        if not all(r.passed for r in reports):
            failed = ", ".join(r.name for r in reports if not r.passed)
            print(f"audit failed: {failed}", file=sys.stderr)
            return EXIT_AUDIT
    print(f"run complete: t={final.time!r}, outputs in {out}")
    return EXIT_OK


def cmd_audit(args) -> int:
    cfg = _load_config(args)
    out = _outdir(cfg)
    records = _records_from_csv(Path(args.trajectory or out / "diagnostics.csv"))
    reports = _run_audits(records, cfg)
    _write_audit(out / "audit_report.csv", reports)
    if cfg.eps > 0 and len(records) >= 3:
        t, lhs, rhs, slack = enstrophy_series(records, cfg.re, cfg.eps)
        write_csv(
            out / "enstrophy_series.csv",
            "enstrophy-series",
            ["t", "lhs", "rhs", "slack"],
            [[float(t[i]), float(lhs[i]), float(rhs[i]), slack] for i in range(len(t))],
        )
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: max_residual={r.max_residual:.3e} tol={r.tolerance:.3e}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_AUDIT


def cmd_convergence(args) -> int:
    cfg = _load_config(args)
    out = _outdir(cfg)
    rows = galerkin_convergence(cfg)
    write_csv(
        out / "convergence.csv",
        "convergence",
        ["m", "m_next", "diff_w", "diff_u"],
        [[r.m, r.m_next, r.diff_w, r.diff_u] for r in rows],
    )
    ok = check_spectral_decay(rows)
    for r in rows:
        print(f"m={r.m} vs m={r.m_next}: |dw|={r.diff_w:.3e} |du|={r.diff_u:.3e}")
    if args.strict and not ok:
        print("convergence check failed: differences do not decay spectrally", file=sys.stderr)
        return EXIT_AUDIT
    return EXIT_OK


def cmd_continuous_dependence(args) -> int:
    cfg = _load_config(args)
    out = _outdir(cfg)
    results = continuous_dependence(cfg)
    rows = []
    for r in results:
        for t, d in zip(r.times, r.d):
            rows.append([r.delta, float(t), float(d)])
    write_csv(out / "continuous_dependence.csv", "cdep", ["delta", "t", "d"], rows)
    write_csv(
        out / "cd_fits.csv",
        "cdep-fit",
        ["delta", "rate", "intercept"],
        [[r.delta, r.rate, r.intercept] for r in results],
    )
    ok = rates_consistent(results) and all(gronwall_bounded(r) for r in results)
    for r in results:
        print(f"delta={r.delta!r}: rate={r.rate:.6g}")
    if args.strict and not ok:
        print("continuous-dependence check failed", file=sys.stderr)
        return EXIT_AUDIT
    return EXIT_OK


def cmd_inequalities(args) -> int:
    cfg = _load_config(args)
    out = _outdir(cfg)
    n = cfg.ineq_grid
    domain = Domain(L=cfg.length, Nx=n, Ny=n, Nz=n, Re=cfg.re, eps=cfg.eps)
    results = run_trilinear_sweep(domain, cfg.seed, cfg.ineq_n)
    rows = []
    for i, r in enumerate(results):
        s = r.spec
        rows.append(
            [r.name, i, s.seed, s.alpha, s.bandwidth[0], s.anisotropy, r.lhs, r.rhs, r.ratio]
        )
    write_csv(
        out / "inequality_results.csv",
        "inequality",
        ["inequality", "case", "seed", "alpha", "bandwidth", "anisotropy", "lhs", "rhs", "ratio"],
        rows,
    )
    fit = fit_constant(results)
    write_csv(
        out / "inequality_constants.csv",
        "inequality-constants",
        ["inequality", "n", "max_ratio", "median_ratio", "p99_ratio"],
        [[fit.name, fit.n, fit.max_ratio, fit.median_ratio, fit.p99_ratio]],
    )
    print(f"{fit.name}: n={fit.n} max={fit.max_ratio:.6g} median={fit.median_ratio:.6g}")
    return EXIT_OK


def cmd_info(args) -> int:
    cfg = _load_config(args)
    d = cfg.domain()
    print(serialize_config(cfg), end="")
    print(f"# grid points: {d.n_points}")
    print(f"# stored spectral coefficients: {int(np.prod(d.spectral_shape))}")
    print(f"# mima3d version: {__version__}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mima3d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--config", required=True, help="path to key=value config")
        p.add_argument("--strict", action="store_true", help="nonzero exit on audit failure")
        p.add_argument("--output", default=None, help="override output directory")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.set_defaults(fn=fn)
        return p

    add("run", cmd_run, help="integrate a trajectory and write diagnostics")
    p_audit = add("audit", cmd_audit, help="audit a recorded trajectory")
    p_audit.add_argument("--trajectory", default=None, help="diagnostics CSV path")
    add("convergence", cmd_convergence, help="Galerkin self-convergence study")
    add("continuous-dependence", cmd_continuous_dependence, help="perturbation growth study")
    add("inequalities", cmd_inequalities, help="randomized inequality sweeps")
    add("info", cmd_info, help="echo the parsed configuration")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (ConfigError, CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BlowUpError, CFLError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Mima3dError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
