"""End-to-end tests for the command-line layer: config validation, file
contracts, determinism, and the exit-code surface."""
import json
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from dunklosc import cli
from dunklosc.cli import (
    ConfigError,
    parse_config,
    run_eval,
    run_propagate,
    run_solve_pinney,
    run_verify,
    state_label,
)
from dunklosc.dunkl1d import StateSpec1D
from dunklosc.dunkl3d import StateSpec3D
from dunklosc.dynamics import phase_base, solve_ermakov_pinney


MINIMAL_1D = textwrap.dedent("""\
    [model]
    dimension = "1d"
    mu = 0.5

    [[states]]
    n = 0
    s = 1
    """)

EVAL_1D = textwrap.dedent("""\
    [scenario]
    t_span = [0.0, 1.0]

    [model]
    dimension = "1d"
    mu = 0.5

    [[states]]
    n = 0
    s = 1

    [[states]]
    n = 1
    s = -1

    [grid]
    x_max = 8.0
    n_points = 400

    [outputs]
    time_samples = [0.0, 0.7]
    """)

EVAL_3D = textwrap.dedent("""\
    [scenario]
    t_span = [0.0, 1.0]

    [model]
    dimension = "3d"
    mu = [0.5, 0.5, 0.5]

    [[states]]
    n_r = 0
    m = 0.5
    l = 0.0
    parity = [1, -1, 1]

    [grid]
    n_points = 24
    n_theta = 6
    n_phi = 8

    [outputs]
    time_samples = [0.5]
    """)


def load_csv(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def read_header(path):
    return path.read_text(encoding="utf-8").splitlines()[0]


# ---------------------------------------------------------------- parsing

def test_minimal_config_fills_documented_defaults():
    config = parse_config(MINIMAL_1D)
    assert config.scenario.hbar == 1.0
    assert config.scenario.t_span == (0.0, 1.0)
    assert config.dimension == "1d"
    assert config.states == [StateSpec1D(0, 1)]
    assert config.grid.x_max is None          # auto
    assert config.grid.n_points is None
    assert config.propagator is None
    assert config.rho0 is None and config.rho_dot0 == 0.0
    assert config.outputs.formats == ("csv", "json")
    assert config.outputs.time_samples == (0.0, 1.0)


def test_unknown_keys_are_hard_errors_with_key_path():
    with pytest.raises(ConfigError, match=r"grid\.typo"):
        parse_config(MINIMAL_1D + "\n[grid]\ntypo = 3\n")
    with pytest.raises(ConfigError, match=r"config\.extra"):
        parse_config(MINIMAL_1D + "\n[extra]\nx = 1\n")
    with pytest.raises(ConfigError, match=r"scenario\.mass\.rate"):
        parse_config(MINIMAL_1D + "\n[scenario.mass]\nkind = 'constant'\nrate = 2.0\n")


def test_mu_out_of_range_names_the_rule():
    bad = MINIMAL_1D.replace("mu = 0.5", "mu = -0.6")
    with pytest.raises(ConfigError, match=r"-1/2"):
        parse_config(bad)


def test_half_integer_ladder_violation_cites_the_rule():
    bad = EVAL_3D.replace("l = 0.0", "l = 1.0").replace("parity = [1, -1, 1]",
                                                        "parity = [1, -1, -1]")
    with pytest.raises(ConfigError, match=r"half-integer"):
        parse_config(bad)


def test_scenario_and_output_validation():
    with pytest.raises(ConfigError, match=r"t_span"):
        parse_config(MINIMAL_1D + "\n[scenario]\nt_span = [0.0, 1.0, 2.0]\n")
    with pytest.raises(ConfigError, match=r"time_samples"):
        parse_config(EVAL_1D.replace("[0.0, 0.7]", "[0.0, 3.0]"))
    with pytest.raises(ConfigError, match=r"formats"):
        parse_config(MINIMAL_1D + "\n[outputs]\nformats = ['xlsx']\n")
    with pytest.raises(ConfigError, match=r"n_points"):
        parse_config(MINIMAL_1D + "\n[grid]\nn_points = 4\n")
    with pytest.raises(ConfigError, match=r"rho0"):
        parse_config(MINIMAL_1D + "\n[scenario]\nrho0 = -2.0\n")


def test_propagator_rejected_for_3d_model():
    with pytest.raises(ConfigError, match=r"propagator"):
        parse_config(EVAL_3D + "\n[propagator]\ndt = 1e-3\nn_steps = 10\n")


def test_state_labels_are_filesystem_stable():
    assert state_label(StateSpec1D(2, -1)) == "n2s-"
    assert state_label(StateSpec1D(0, 1)) == "n0s+"
    spec = StateSpec3D(n_r=1, m=1.0, l=1.5, parity=(-1, -1, -1))
    assert state_label(spec) == "nr1_l3/2_m1_s---"


# ---------------------------------------------------------------- solve-pinney

def test_solve_pinney_constant_scenario_and_determinism(tmp_path):
    text = MINIMAL_1D + "\n[scenario]\nt_span = [0.0, 2.0]\n\n[scenario.mass]\nkind = 'constant'\nvalue = 2.0\n"
    config = parse_config(text)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    out_a.mkdir()
    out_b.mkdir()
    assert run_solve_pinney(config, out_a) == 0
    assert run_solve_pinney(config, out_b) == 0
    assert read_header(out_a / "pinney.csv") == "t,rho,rho_dot,theta,M,omega"
    assert (out_a / "pinney.csv").read_bytes() == (out_b / "pinney.csv").read_bytes()

    data = load_csv(out_a / "pinney.csv")
    t, rho, theta = data[:, 0], data[:, 1], data[:, 3]
    assert np.max(np.abs(rho - 1.0 / np.sqrt(2.0))) < 1e-9
    trajectory = solve_ermakov_pinney(config.scenario)
    expected = np.array([phase_base(trajectory, ti) for ti in t])
    assert np.max(np.abs(theta - expected)) < 1e-12
    assert data[:, 4] == pytest.approx(2.0)


# ---------------------------------------------------------------- eval

def test_eval_writes_tables_and_eigenvalues(tmp_path):
    config = parse_config(EVAL_1D)
    assert run_eval(config, tmp_path) == 0

    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["eigenvalues.json", "state_n0s+_t0.csv", "state_n0s+_t1.csv",
                     "state_n1s-_t0.csv", "state_n1s-_t1.csv"]

    eigen = json.loads((tmp_path / "eigenvalues.json").read_text())
    assert eigen["n0s+"]["eigenvalue"] == pytest.approx(1.0, abs=1e-12)
    assert eigen["n1s-"]["eigenvalue"] == pytest.approx(4.0, abs=1e-12)
    phases = {entry["t"]: entry["eta"] for entry in eigen["n0s+"]["phases"]}
    assert phases[0.0] == pytest.approx(0.0, abs=1e-12)
    assert phases[0.7] == pytest.approx(-0.7, abs=1e-9)
    phases_odd = {entry["t"]: entry["eta"] for entry in eigen["n1s-"]["phases"]}
    assert phases_odd[0.7] == pytest.approx(-2.8, abs=1e-9)

    even = load_csv(tmp_path / "state_n0s+_t0.csv")
    assert read_header(tmp_path / "state_n0s+_t0.csv") == "x,re,im,abs2"
    assert even.shape == (800, 4)   # full line, 400 points per side
    assert np.max(np.abs(even[:, 3] - (even[:, 1] ** 2 + even[:, 2] ** 2))) < 1e-15
    # reflection symmetry of the density
    assert np.max(np.abs(even[:, 3] - even[::-1, 3])) < 1e-15
    assert abs(even[:, 0].max() - (8.0 - 0.01)) < 1e-12

    odd = load_csv(tmp_path / "state_n1s-_t0.csv")
    positive = odd[odd[:, 0] > 0.0]
    first3 = positive[:3, 3]
    assert first3[0] < first3[1] < first3[2]   # density falls toward the origin
    assert first3[0] < 1e-3


def test_eval_is_byte_deterministic(tmp_path):
    config = parse_config(EVAL_1D)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    out_a.mkdir()
    out_b.mkdir()
    run_eval(config, out_a)
    run_eval(config, out_b)
    for path in sorted(out_a.iterdir()):
        assert path.read_bytes() == (out_b / path.name).read_bytes()


def test_eval_3d_tensor_grid(tmp_path):
    config = parse_config(EVAL_3D)
    assert run_eval(config, tmp_path) == 0
    table = tmp_path / "state_nr0_l0_m1-2_s+-+_t0.csv"
    assert table.exists()   # '/' in the label is mapped to '-'
    assert read_header(table) == "r,theta,phi,re,im,abs2"
    data = load_csv(table)
    assert data.shape == (24 * 6 * 8, 6)
    assert np.max(np.abs(data[:, 5] - (data[:, 3] ** 2 + data[:, 4] ** 2))) < 1e-15
    # row-major r -> theta -> phi: phi varies fastest
    assert data[0, 0] == data[1, 0] and data[0, 1] == data[1, 1]
    assert data[1, 2] > data[0, 2]
    eigen = json.loads((tmp_path / "eigenvalues.json").read_text())
    label = "nr0_l0_m1/2_s+-+"
    assert eigen[label]["eigenvalue"] == pytest.approx(4.0, abs=1e-12)


# ---------------------------------------------------------------- verify

def test_verify_default_roster_passes(tmp_path):
    config = parse_config(EVAL_1D)
    assert run_verify(config, tmp_path) == 0
    reports = json.loads((tmp_path / "verify.json").read_text())
    names = [r["name"] for r in reports]
    assert names[0] == "pinney-residual"
    for label in ("n0s+", "n1s-"):
        assert f"schrodinger-residual[{label}]" in names
        assert f"invariant-eigenresidual[{label}]" in names
    assert "gram-orthonormality[s+]" in names
    assert "gram-orthonormality[s-]" in names
    for pair in ("T1,T2", "T2,T3", "T1,T3"):
        assert f"commutator-algebra[{pair}]" in names
    assert not any(name == "invariant-drift" for name in names)
    assert all(r["passed"] for r in reports)
    assert all(r["value"] <= r["tolerance"] for r in reports)


def test_verify_negative_control_rho_scaling(tmp_path):
    config = parse_config(EVAL_1D)
    assert run_verify(config, tmp_path, rho_scale=1.01) == 4
    reports = json.loads((tmp_path / "verify.json").read_text())
    by_name = {r["name"]: r for r in reports}
    # the Schrodinger residual is the check that must catch a corrupted rho
    assert not by_name["schrodinger-residual[n0s+]"]["passed"]
    assert not by_name["schrodinger-residual[n1s-]"]["passed"]
    # basis checks do not depend on the trajectory and must stay green
    assert by_name["gram-orthonormality[s+]"]["passed"]
    assert by_name["gram-orthonormality[s-]"]["passed"]


def test_verify_includes_drift_when_propagator_configured(tmp_path):
    text = EVAL_1D + "\n[propagator]\ndt = 1e-3\nn_steps = 50\n"
    config = parse_config(text)
    assert run_verify(config, tmp_path) == 0
    reports = json.loads((tmp_path / "verify.json").read_text())
    drift = [r for r in reports if r["name"] == "invariant-drift"]
    assert len(drift) == 1 and drift[0]["passed"]


def test_verify_3d_adds_angular_checks(tmp_path):
    config = parse_config(EVAL_3D)
    assert run_verify(config, tmp_path) == 0
    reports = json.loads((tmp_path / "verify.json").read_text())
    names = [r["name"] for r in reports]
    label = "nr0_l0_m1/2_s+-+"
    assert f"schrodinger-residual[{label}]" in names
    assert f"angular-residual[azimuthal][{label}]" in names
    assert f"angular-residual[polar][{label}]" in names
    by_name = {r["name"]: r for r in reports}
    assert by_name[f"schrodinger-residual[{label}]"]["context"]["radial_equivalent"]
    assert all(r["passed"] for r in reports)


# ---------------------------------------------------------------- propagate

def test_propagate_fidelity_contract(tmp_path):
    text = textwrap.dedent("""\
        [scenario]
        t_span = [0.0, 0.5]

        [model]
        dimension = "1d"
        mu = 0.5

        [[states]]
        n = 0
        s = 1

        [grid]
        x_max = 10.0
        n_points = 1000

        [propagator]
        dt = 1e-3
        n_steps = 200
        """)
    config = parse_config(text)
    assert run_propagate(config, tmp_path) == 0
    assert read_header(tmp_path / "fidelity.csv") == "t,fidelity,norm_drift,invariant_drift"
    data = load_csv(tmp_path / "fidelity.csv")
    t = data[:, 0]
    assert t[0] == 0.0
    assert np.max(np.abs(np.diff(t) - 1e-3)) < 1e-12   # stride 1 at 200 steps
    assert np.min(data[:, 1]) >= 0.999999
    assert np.max(data[:, 2]) <= 1e-10
    assert np.max(data[:, 3]) <= 1e-6


def test_propagate_requires_propagator_section(tmp_path):
    config = parse_config(EVAL_1D)
    with pytest.raises(ConfigError, match=r"propagator"):
        run_propagate(config, tmp_path)


# ---------------------------------------------------------------- main / exit codes

def test_main_exit_codes(tmp_path):
    good = tmp_path / "good.toml"
    good.write_text(MINIMAL_1D, encoding="utf-8")
    out = tmp_path / "out"
    assert cli.main(["solve-pinney", "--config", str(good), "--out", str(out)]) == 0
    assert (out / "pinney.csv").exists()

    assert cli.main(["solve-pinney", "--config", str(tmp_path / "missing.toml"),
                     "--out", str(out)]) == 2

    bad = tmp_path / "bad.toml"
    bad.write_text("= nonsense", encoding="utf-8")
    assert cli.main(["solve-pinney", "--config", str(bad), "--out", str(out)]) == 2

    invalid = tmp_path / "invalid.toml"
    invalid.write_text(MINIMAL_1D.replace("mu = 0.5", "mu = -0.6"), encoding="utf-8")
    assert cli.main(["eval", "--config", str(invalid), "--out", str(out)]) == 2

    # propagate without a propagator section is a config mistake, not a crash
    noprop = tmp_path / "noprop.toml"
    noprop.write_text(EVAL_1D, encoding="utf-8")
    assert cli.main(["propagate", "--config", str(noprop), "--out", str(out)]) == 2


def test_main_reports_numerical_failure(tmp_path):
    collapse = tmp_path / "collapse.toml"
    collapse.write_text(MINIMAL_1D + "\n[scenario]\nrho_dot0 = -1e9\n", encoding="utf-8")
    out = tmp_path / "out"
    assert cli.main(["solve-pinney", "--config", str(collapse), "--out", str(out)]) == 3


def test_main_uses_config_output_directory(tmp_path):
    target = tmp_path / "nested" / "outdir"
    text = MINIMAL_1D + f"\n[outputs]\ndirectory = '{target}'\n"
    cfg = tmp_path / "run.toml"
    cfg.write_text(text, encoding="utf-8")
    assert cli.main(["solve-pinney", "--config", str(cfg)]) == 0
    assert (target / "pinney.csv").exists()


def test_console_entry_point(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(MINIMAL_1D, encoding="utf-8")
    out = tmp_path / "out"
    result = subprocess.run(
        [sys.executable, "-m", "dunklosc.cli", "solve-pinney",
         "--config", str(cfg), "--out", str(out)],
        capture_output=True, text=True)
    assert result.returncode == 0
    assert (out / "pinney.csv").exists()

    result = subprocess.run(
        [sys.executable, "-m", "dunklosc.cli", "eval", "--config", str(tmp_path / "nope.toml")],
        capture_output=True, text=True)
    assert result.returncode == 2
    assert "cannot read config" in result.stderr
