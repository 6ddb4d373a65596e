"""Config parsing, initial profiles, checkpoints, and CSV round trips."""

import numpy as np
import pytest

from mima3d.checkpoint import MAGIC, load_checkpoint, save_checkpoint
from mima3d.config import (
    RunConfig,
    initial_state,
    parse_config,
    parse_profile,
    serialize_config,
)
from mima3d.csvio import read_csv, write_csv
from mima3d.domain import Domain, grids
from mima3d.dynamics import State
from mima3d.errors import CheckpointError, ConfigError
from mima3d.spectral import (
    PhysicalField,
    forward_transform,
    inverse_transform,
    l2_norm,
    random_band_limited,
    weighted_norm,
)

MINIMAL = """
nx = 12
ny = 12
nz = 12
length = 6.283185307179586
re = 100.0
eps = 0.5
dt = 0.001
t_end = 0.1
"""


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def test_parse_minimal():
    cfg = parse_config(MINIMAL)
    assert cfg.nx == 12 and cfg.re == 100.0 and cfg.dt == 0.001
    assert cfg.scheme == "if_rk4"  # default


def test_parse_comments_and_sections():
    text = MINIMAL + "\n[stepper]  # grouping only\nscheme = imex_cnab2 # trailing\n"
    cfg = parse_config(text)
    assert cfg.scheme == "imex_cnab2"


def test_parse_round_trip():
    cfg = parse_config(MINIMAL)
    text = serialize_config(cfg)
    again = parse_config(text)
    assert again == cfg
    assert serialize_config(again) == text


def test_parse_round_trip_with_options():
    cfg = parse_config(
        MINIMAL + "galerkin_radius = 3\nconvergence_m = 2,4\ncd_deltas = 1e-8,1e-6\n"
    )
    assert cfg.galerkin_radius == 3
    assert cfg.convergence_m == (2, 4)
    assert cfg.cd_deltas == (1e-8, 1e-6)
    assert parse_config(serialize_config(cfg)) == cfg


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("nx = 12\nbogus_key = 3\n")
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("nx = 12\nnx = 16\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("nx twelve\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("nx = twelve\n")


def test_parse_missing_required_keys():
    with pytest.raises(ConfigError, match="missing required"):
        parse_config("nx = 12\nny = 12\n")


def test_parse_rejects_odd_grid():
    with pytest.raises(ConfigError, match="nx"):
        parse_config(MINIMAL.replace("nx = 12", "nx = 13"))


def test_parse_rejects_bad_scheme_and_profile():
    with pytest.raises(ConfigError):
        parse_config(MINIMAL + "scheme = euler\n")
    with pytest.raises(ConfigError):
        parse_config(MINIMAL + "initial = vortex_soup(1)\n")


def test_parse_profile():
    assert parse_profile("single_mode(1,0,1)") == ("single_mode", (1.0, 0.0, 1.0))
    assert parse_profile("taylor_green_h") == ("taylor_green_h", ())
    assert parse_profile("random_smooth(2.0, 5)") == ("random_smooth", (2.0, 5.0))
    with pytest.raises(ConfigError):
        parse_profile("random_smooth(a)")
    with pytest.raises(ConfigError):
        parse_profile("Not A Profile")


# ---------------------------------------------------------------------------
# initial profiles
# ---------------------------------------------------------------------------

def test_single_mode_profile():
    cfg = RunConfig(nx=12, ny=12, nz=12, initial="single_mode(1,0,1)", amplitude=2.0)
    st = initial_state(cfg)
    d = cfg.domain()
    x = np.arange(d.Nx) * d.L / d.Nx
    z = np.arange(d.Nz) / d.Nz
    X, _, Z = np.meshgrid(x, x, z, indexing="ij")
    expected = 2.0 * np.cos(X + 2 * np.pi * Z)
    assert np.max(np.abs(inverse_transform(st.w_hat).values - expected)) < 1e-12
    assert np.max(np.abs(inverse_transform(st.omega_hat).values - expected)) < 1e-12


def test_single_mode_requires_horizontal_wavevector():
    cfg = RunConfig(nx=12, ny=12, nz=12, initial="single_mode(0,0,1)")
    with pytest.raises(ConfigError):
        initial_state(cfg)


def test_taylor_green_profile():
    cfg = RunConfig(nx=16, ny=16, nz=8, initial="taylor_green_h", amplitude=1.0)
    st = initial_state(cfg)
    d = cfg.domain()
    x = np.arange(d.Nx) * d.L / d.Nx
    z = np.arange(d.Nz) / d.Nz
    X, Y, Z = np.meshgrid(x, x, z, indexing="ij")
    w_exact = np.cos(X) * np.cos(Y) * np.sin(2 * np.pi * Z)
    assert np.max(np.abs(inverse_transform(st.w_hat).values - w_exact)) < 1e-12
    # omega has zero horizontal mean by construction
    assert np.max(np.abs(st.omega_hat.coeffs[0, 0, :])) == 0.0


def test_random_profiles_normalized():
    for profile in ("random_smooth(2.0)", "random_analytic(1.0)"):
        cfg = RunConfig(nx=16, ny=16, nz=16, initial=profile, amplitude=0.7, seed=3)
        st = initial_state(cfg)
        g = grids(cfg.domain())
        inv_kh2 = np.where(g.mean_h, 0.0, 1.0 / g.kh2_safe)
        assert abs(l2_norm(st.w_hat) - 0.7) < 1e-12
        assert abs(weighted_norm(st.omega_hat, inv_kh2) - 0.7) < 1e-12


def test_random_smooth_bandwidth_argument():
    cfg = RunConfig(nx=16, ny=16, nz=16, initial="random_smooth(2.0,2)", seed=3)
    st = initial_state(cfg)
    g = grids(cfg.domain())
    outside = (np.abs(g.jx) > 2) | (np.abs(g.jy) > 2) | (np.abs(g.jz) > 2)
    assert np.max(np.abs(np.where(outside, st.w_hat.coeffs, 0.0))) == 0.0


def test_zero_profile_and_seed_override():
    cfg = RunConfig(nx=12, ny=12, nz=12, initial="zero")
    st = initial_state(cfg)
    assert np.max(np.abs(st.w_hat.coeffs)) == 0.0
    a = initial_state(RunConfig(nx=12, ny=12, nz=12, seed=1))
    b = initial_state(RunConfig(nx=12, ny=12, nz=12, seed=1))
    c = initial_state(RunConfig(nx=12, ny=12, nz=12, seed=2))
    assert np.array_equal(a.w_hat.coeffs, b.w_hat.coeffs)
    assert not np.array_equal(a.w_hat.coeffs, c.w_hat.coeffs)


def test_initial_state_applies_galerkin_projection():
    cfg = RunConfig(nx=16, ny=16, nz=16, galerkin_radius=2, seed=3)
    st = initial_state(cfg)
    g = grids(cfg.domain())
    assert np.max(np.abs(np.where(~g.ball_mask(2), st.w_hat.coeffs, 0.0))) == 0.0


# ---------------------------------------------------------------------------
# checkpoints
# ---------------------------------------------------------------------------

def make_state(domain, rng, t=0.375):
    w = random_band_limited(domain, rng)
    om = random_band_limited(domain, rng, zero_mean_h=True)
    return State(w, om, time=t)


def test_checkpoint_round_trip_bit_exact(tmp_path, domain, rng):
    st = make_state(domain, rng)
    path = tmp_path / "state.ckpt"
    save_checkpoint(st, path)
    back = load_checkpoint(path, expected=domain)
    assert back.time == st.time
    assert np.array_equal(back.w_hat.coeffs, st.w_hat.coeffs)
    assert np.array_equal(back.omega_hat.coeffs, st.omega_hat.coeffs)


def test_checkpoint_save_is_deterministic(tmp_path, domain, rng):
    st = make_state(domain, rng)
    p1, p2 = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
    save_checkpoint(st, p1)
    save_checkpoint(st, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_checkpoint_bad_magic(tmp_path, domain, rng):
    path = tmp_path / "state.ckpt"
    save_checkpoint(make_state(domain, rng), path)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match="magic"):
        load_checkpoint(path)


def test_checkpoint_unsupported_version(tmp_path, domain, rng):
    path = tmp_path / "state.ckpt"
    save_checkpoint(make_state(domain, rng), path)
    raw = bytearray(path.read_bytes())
    raw[len(MAGIC)] = 99  # little-endian uint32 version field
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match="version"):
        load_checkpoint(path)


def test_checkpoint_truncated(tmp_path, domain, rng):
    path = tmp_path / "state.ckpt"
    save_checkpoint(make_state(domain, rng), path)
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) // 2])
    with pytest.raises(CheckpointError, match="bytes"):
        load_checkpoint(path)
    path.write_bytes(raw[:10])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(path)


def test_checkpoint_grid_mismatch(tmp_path, domain, rng):
    path = tmp_path / "state.ckpt"
    save_checkpoint(make_state(domain, rng), path)
    other = Domain(L=domain.L, Nx=16, Ny=16, Nz=16, Re=domain.Re, eps=domain.eps)
    with pytest.raises(CheckpointError, match="grid"):
        load_checkpoint(path, expected=other)
    wrong_re = Domain(L=domain.L, Nx=domain.Nx, Ny=domain.Ny, Nz=domain.Nz, Re=1.0, eps=domain.eps)
    with pytest.raises(CheckpointError, match="parameters"):
        load_checkpoint(path, expected=wrong_re)


# ---------------------------------------------------------------------------
# CSV layer
# ---------------------------------------------------------------------------

def test_csv_round_trip(tmp_path):
    path = tmp_path / "out.csv"
    rows = [[0.1, 2.0, "abc"], [0.2, float(np.pi), "def"]]
    write_csv(path, "audit", ["a", "b", "c"], rows)
    cols, back = read_csv(path, "audit")
    assert cols == ["a", "b", "c"]
    assert back[1][1] == float(np.pi)  # repr round-trips exactly
    assert back[0][2] == "abc"


def test_csv_schema_enforced(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(path, "audit", ["a"], [[1.0]])
    with pytest.raises(ValueError, match="schema"):
        read_csv(path, "diagnostics")
    path.write_text("a\n1.0\n")
    with pytest.raises(ValueError, match="schema line"):
        read_csv(path, "audit")


def test_csv_bool_formatting(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(path, "audit", ["ok"], [[True], [False]])
    text = path.read_text()
    assert "true" in text and "false" in text
