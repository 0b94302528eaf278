"""Command-line front end: config ingestion, orchestration, bit-exact output.

Subcommands operate on a single TOML config document (runs are the unit of
reproducibility; flags only pick the subcommand, the config path, and an
output-directory override):

    dunklosc solve-pinney --config run.toml [--out DIR]
    dunklosc eval         --config run.toml [--out DIR]
    dunklosc verify       --config run.toml [--out DIR]
    dunklosc propagate    --config run.toml [--out DIR]

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 verification
failure. All numeric output is written with 17 significant digits and no
wall-clock or unordered iteration, so identical configs give byte-identical
files.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import oracle
from .dunkl1d import (
    Dunkl1DModel,
    StateSpec1D,
    eigenvalue_1d,
    phase_1d,
    wavefunction_1d,
)
from .dunkl3d import (
    Dunkl3DModel,
    StateSpec3D,
    eigenvalue_3d,
    phase_3d,
    separation_constants,
    wavefunction_3d,
)
from .dynamics import (
    PinneySingularityError,
    PinneyStiffnessError,
    PinneyTrajectory,
    Scenario,
    TimeProfile,
    solve_ermakov_pinney,
)

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_config",
    "run_solve_pinney",
    "run_eval",
    "run_verify",
    "run_propagate",
    "main",
]

_PINNEY_TOLERANCE = 1e-8
_RESIDUAL_TOLERANCE = 1e-4
_GRAM_TOLERANCE = 1e-8
_ANGULAR_TOLERANCE = 1e-8
_DRIFT_TOLERANCE = 1e-4

_PROFILE_KEYS = {
    "constant": {"kind", "value"},
    "linear": {"kind", "value", "rate"},
    "exponential": {"kind", "value", "rate"},
    "sinusoidal": {"kind", "value", "amplitude", "angular_rate"},
    "tabulated": {"kind", "times", "values"},
}


class ConfigError(ValueError):
    """Invalid configuration document (parse, key, or invariant violation)."""


@dataclass
class GridConfig:
    x_max: float | None  # None means auto
    n_points: int | None
    n_theta: int
    n_phi: int


@dataclass
class PropagatorConfig:
    dt: float
    n_steps: int


@dataclass
class OutputConfig:
    directory: str
    formats: tuple
    time_samples: tuple


@dataclass
class RunConfig:
    scenario: Scenario
    dimension: str
    model: object
    states: list
    grid: GridConfig
    propagator: PropagatorConfig | None
    outputs: OutputConfig
    rho0: float | None = None
    rho_dot0: float = 0.0


def _check_keys(mapping: dict, allowed: set, path: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown key '{path}.{key}' (allowed: {sorted(allowed)})")


def _require(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise ConfigError(f"missing required key '{path}.{key}'")
    return mapping[key]


def _parse_profile(section: dict, path: str) -> TimeProfile:
    kind = _require(section, "kind", path)
    if kind not in _PROFILE_KEYS:
        raise ConfigError(f"'{path}.kind' must be one of {sorted(_PROFILE_KEYS)}, got {kind!r}")
    _check_keys(section, _PROFILE_KEYS[kind], path)
    try:
        if kind == "constant":
            return TimeProfile.constant(float(section.get("value", 1.0)))
        if kind == "linear":
            return TimeProfile.linear(float(section.get("value", 1.0)),
                                      float(section.get("rate", 0.0)))
        if kind == "exponential":
            return TimeProfile.exponential(float(section.get("value", 1.0)),
                                           float(section.get("rate", 0.0)))
        if kind == "sinusoidal":
            return TimeProfile.sinusoidal(float(section.get("value", 1.0)),
                                          float(section.get("amplitude", 0.0)),
                                          float(section.get("angular_rate", 0.0)))
        return TimeProfile.tabulated(_require(section, "times", path),
                                     _require(section, "values", path))
    except ValueError as exc:
        raise ConfigError(f"invalid profile at '{path}': {exc}") from exc


def _parse_scenario(section: dict) -> Scenario:
    _check_keys(section, {"hbar", "t_span", "mass", "omega", "rho0", "rho_dot0"}, "scenario")
    hbar = float(section.get("hbar", 1.0))
    t_span = section.get("t_span", [0.0, 1.0])
    if not (isinstance(t_span, (list, tuple)) and len(t_span) == 2):
        raise ConfigError("'scenario.t_span' must be a two-element array [0, t_end]")
    mass = _parse_profile(section.get("mass", {"kind": "constant", "value": 1.0}), "scenario.mass")
    omega = _parse_profile(section.get("omega", {"kind": "constant", "value": 1.0}), "scenario.omega")
    try:
        return Scenario(mass=mass, omega=omega, hbar=hbar,
                        t_span=(float(t_span[0]), float(t_span[1])))
    except ValueError as exc:
        raise ConfigError(f"invalid 'scenario': {exc}") from exc


def _parse_model(section: dict, hbar: float):
    _check_keys(section, {"dimension", "mu"}, "model")
    dimension = _require(section, "dimension", "model")
    if dimension not in ("1d", "3d"):
        raise ConfigError(f"'model.dimension' must be '1d' or '3d', got {dimension!r}")
    mu = _require(section, "mu", "model")
    try:
        if dimension == "1d":
            if isinstance(mu, (list, tuple)):
                raise ConfigError("'model.mu' must be a scalar for dimension = '1d'")
            return dimension, Dunkl1DModel(mu=float(mu), hbar=hbar)
        if not (isinstance(mu, (list, tuple)) and len(mu) == 3):
            raise ConfigError("'model.mu' must be a three-element array for dimension = '3d'")
        return dimension, Dunkl3DModel(mu=tuple(float(v) for v in mu), hbar=hbar)
    except ValueError as exc:
        raise ConfigError(f"invalid 'model': {exc}") from exc


def _parse_states(sections: list, dimension: str) -> list:
    if not sections:
        raise ConfigError("at least one [[states]] entry is required")
    states = []
    for idx, section in enumerate(sections):
        path = f"states[{idx}]"
        try:
            if dimension == "1d":
                _check_keys(section, {"n", "s"}, path)
                states.append(StateSpec1D(n=int(_require(section, "n", path)),
                                          s=int(_require(section, "s", path))))
            else:
                _check_keys(section, {"n_r", "m", "l", "parity"}, path)
                parity = _require(section, "parity", path)
                if not (isinstance(parity, (list, tuple)) and len(parity) == 3):
                    raise ConfigError(f"'{path}.parity' must be a three-element array")
                states.append(StateSpec3D(n_r=int(_require(section, "n_r", path)),
                                          m=float(_require(section, "m", path)),
                                          l=float(_require(section, "l", path)),
                                          parity=tuple(int(s) for s in parity)))
        except ValueError as exc:
            raise ConfigError(f"invalid '{path}': {exc}") from exc
    return states


def _parse_grid(section: dict) -> GridConfig:
    _check_keys(section, {"x_max", "n_points", "n_theta", "n_phi"}, "grid")
    x_max = section.get("x_max", "auto")
    if x_max == "auto":
        x_max = None
    else:
        x_max = float(x_max)
        if not x_max > 0.0:
            raise ConfigError("'grid.x_max' must be positive or 'auto'")
    n_points = section.get("n_points")
    if n_points is not None:
        n_points = int(n_points)
        if n_points < 16:
            raise ConfigError("'grid.n_points' must be at least 16")
    n_theta = int(section.get("n_theta", 24))
    n_phi = int(section.get("n_phi", 48))
    if n_theta < 4 or n_phi < 4:
        raise ConfigError("'grid.n_theta' and 'grid.n_phi' must be at least 4")
    return GridConfig(x_max=x_max, n_points=n_points, n_theta=n_theta, n_phi=n_phi)


def _parse_propagator(section: dict) -> PropagatorConfig:
    _check_keys(section, {"dt", "n_steps"}, "propagator")
    dt = float(_require(section, "dt", "propagator"))
    n_steps = int(_require(section, "n_steps", "propagator"))
    if not dt > 0.0:
        raise ConfigError("'propagator.dt' must be positive")
    if n_steps < 1:
        raise ConfigError("'propagator.n_steps' must be at least 1")
    return PropagatorConfig(dt=dt, n_steps=n_steps)


def _parse_outputs(section: dict, t_end: float) -> OutputConfig:
    _check_keys(section, {"directory", "formats", "time_samples"}, "outputs")
    formats = tuple(section.get("formats", ["csv", "json"]))
    for fmt in formats:
        if fmt not in ("csv", "json"):
            raise ConfigError(f"'outputs.formats' entries must be 'csv' or 'json', got {fmt!r}")
    samples = tuple(float(t) for t in section.get("time_samples", [0.0, t_end]))
    for t in samples:
        if t < 0.0 or t > t_end + 1e-12:
            raise ConfigError(f"'outputs.time_samples' entry {t} outside [0, {t_end}]")
    return OutputConfig(directory=str(section.get("directory", ".")),
                        formats=formats, time_samples=samples)


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a TOML config document.

    Unknown keys anywhere are hard errors; every invariant violation is
    reported with its key path.
    """
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML parse error: {exc}") from exc
    _check_keys(raw, {"scenario", "model", "states", "grid", "propagator", "outputs"}, "config")
    scenario_raw = raw.get("scenario", {})
    scenario = _parse_scenario(scenario_raw)
    rho0 = scenario_raw.get("rho0")
    if rho0 is not None:
        rho0 = float(rho0)
        if not rho0 > 0.0:
            raise ConfigError("'scenario.rho0' must be positive")
    rho_dot0 = float(scenario_raw.get("rho_dot0", 0.0))
    dimension, model = _parse_model(_require(raw, "model", "config"), scenario.hbar)
    states = _parse_states(raw.get("states", []), dimension)
    grid = _parse_grid(raw.get("grid", {}))
    propagator = _parse_propagator(raw["propagator"]) if "propagator" in raw else None
    if propagator is not None and dimension == "3d":
        raise ConfigError("'propagator' is only supported for dimension = '1d'")
    outputs = _parse_outputs(raw.get("outputs", {}), scenario.t_span[1])
    return RunConfig(scenario=scenario, dimension=dimension, model=model, states=states,
                     grid=grid, propagator=propagator, outputs=outputs,
                     rho0=rho0, rho_dot0=rho_dot0)


def _fraction(value: float) -> str:
    two = int(round(2.0 * value))
    return str(two // 2) if two % 2 == 0 else f"{two}/2"


def state_label(spec) -> str:
    """Stable state label: n0s+ (1d) or nr0_l3/2_m1/2_s+-+ (3d)."""
    if isinstance(spec, StateSpec1D):
        return f"n{spec.n}s{'+' if spec.s == 1 else '-'}"
    signs = "".join("+" if s == 1 else "-" for s in spec.parity)
    return f"nr{spec.n_r}_l{_fraction(spec.l)}_m{_fraction(spec.m)}_s{signs}"


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(header + "\n")
        for row in rows:
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _solve_trajectory(config: RunConfig) -> PinneyTrajectory:
    return solve_ermakov_pinney(config.scenario, rho0=config.rho0, rho_dot0=config.rho_dot0)


def _resolve_grid_1d(config: RunConfig, model: Dunkl1DModel, specs,
                     trajectory: PinneyTrajectory) -> oracle.SpatialGrid1D:
    gc = config.grid
    if gc.x_max is not None:
        n_points = gc.n_points or max(2000, int(math.ceil(gc.x_max / 0.01)))
        return oracle.SpatialGrid1D(x_max=gc.x_max, n_points=n_points)
    if gc.n_points is None:
        return oracle.auto_grid(model, specs, trajectory)
    auto = oracle.auto_grid(model, specs, trajectory)
    return oracle.SpatialGrid1D(x_max=auto.x_max, n_points=gc.n_points)


def run_solve_pinney(config: RunConfig, out_dir: Path) -> int:
    """Write pinney.csv with the dense auxiliary solution."""
    trajectory = _solve_trajectory(config)
    rows = zip(trajectory.times, trajectory.rho, trajectory.rho_dot,
               trajectory.theta, trajectory.mass, trajectory.omega)
    _write_csv(out_dir / "pinney.csv", "t,rho,rho_dot,theta,M,omega", rows)
    return 0


def _radial_equivalent(model: Dunkl3DModel, spec: StateSpec3D):
    """The 1D sector equivalent to the 3D radial problem: nu = sigma at s = +1."""
    sigma = separation_constants(model, spec).sigma
    return Dunkl1DModel(mu=sigma + 0.5, hbar=model.hbar), StateSpec1D(n=spec.n_r, s=1)


def run_eval(config: RunConfig, out_dir: Path) -> int:
    """Write per-state wavefunction tables and eigenvalues.json."""
    trajectory = _solve_trajectory(config)
    samples = config.outputs.time_samples
    eigen = {}
    for spec in config.states:
        label = state_label(spec)
        if config.dimension == "1d":
            eigenvalue = eigenvalue_1d(config.model, spec)
            phases = [phase_1d(config.model, spec, trajectory, t) for t in samples]
        else:
            eigenvalue = eigenvalue_3d(config.model, spec)
            phases = [phase_3d(config.model, spec, trajectory, t) for t in samples]
        eigen[label] = {
            "eigenvalue": eigenvalue,
            "phases": [{"t": t, "eta": eta} for t, eta in zip(samples, phases)],
        }
        if "csv" not in config.outputs.formats:
            continue
        for index, t in enumerate(samples):
            path = out_dir / f"state_{label.replace('/', '-')}_t{index}.csv"
            if config.dimension == "1d":
                grid = _resolve_grid_1d(config, config.model, config.states, trajectory)
                x = np.concatenate((-grid.points[::-1], grid.points))
                values = wavefunction_1d(config.model, spec, x, trajectory, t).value
                rows = zip(x, values.real, values.imag, np.abs(values) ** 2)
                _write_csv(path, "x,re,im,abs2", rows)
            else:
                rows = _eval_rows_3d(config, spec, trajectory, t)
                _write_csv(path, "r,theta,phi,re,im,abs2", rows)
    if "json" in config.outputs.formats:
        _write_json(out_dir / "eigenvalues.json", eigen)
    return 0


def _eval_rows_3d(config: RunConfig, spec: StateSpec3D, trajectory: PinneyTrajectory, t: float):
    model = config.model
    gc = config.grid
    sigma_max = max(separation_constants(model, s).sigma for s in config.states)
    n_r_max = max(s.n_r for s in config.states)
    rho_max = float(np.max(trajectory.rho))
    r_max = gc.x_max or rho_max * math.sqrt(model.hbar * (4 * n_r_max + 4 * sigma_max + 80.0))
    n_r_points = gc.n_points or 64
    r = (np.arange(n_r_points) + 0.5) * (r_max / n_r_points)
    theta = (np.arange(gc.n_theta) + 0.5) * (math.pi / gc.n_theta)
    phi = (np.arange(gc.n_phi) + 0.5) * (2.0 * math.pi / gc.n_phi)
    rr, tt, pp = np.meshgrid(r, theta, phi, indexing="ij")
    values = wavefunction_3d(model, spec, rr.ravel(), tt.ravel(), pp.ravel(), trajectory, t)
    return zip(rr.ravel(), tt.ravel(), pp.ravel(),
               values.real, values.imag, np.abs(values) ** 2)


def _scaled_trajectory(trajectory: PinneyTrajectory, scale: float) -> PinneyTrajectory:
    """Test hook: scale rho (and consistently rho_dot, theta) by a constant.

    The result deliberately violates the auxiliary equation; the residual is
    recomputed from spline derivatives so the corruption is visible.
    """
    times = trajectory.times
    rho = trajectory.rho * scale
    rho_dot = trajectory.rho_dot * scale
    theta = trajectory.theta / (scale * scale)
    mass_spline = CubicSpline(times, trajectory.mass)
    rho_dd = CubicSpline(times, rho_dot).derivative()(times[1:-1])
    mi = trajectory.mass[1:-1]
    mi_dot = mass_spline.derivative()(times[1:-1])
    wi = trajectory.omega[1:-1]
    ri, ri_dot = rho[1:-1], rho_dot[1:-1]
    resid = rho_dd + (mi_dot / mi) * ri_dot + wi * wi * ri - 1.0 / (mi * mi * ri ** 3)
    scale_arr = np.maximum(1.0, np.abs(wi * wi * ri))
    return PinneyTrajectory(
        times=times, rho=rho, rho_dot=rho_dot, theta=theta,
        mass=trajectory.mass, omega=trajectory.omega,
        residual_max=float(np.max(np.abs(resid) / scale_arr)),
        _rho_spline=CubicSpline(times, rho),
        _rho_dot_spline=CubicSpline(times, rho_dot),
        _theta_spline=CubicSpline(times, theta),
        _mass_spline=mass_spline,
        _omega_spline=CubicSpline(times, trajectory.omega),
    )


def _verify_reports(config: RunConfig, trajectory: PinneyTrajectory) -> list:
    scenario = config.scenario
    t_end = scenario.t_span[1]
    t_samples = [0.25 * t_end, 0.5 * t_end, 0.75 * t_end]
    reports = [oracle.ResidualReport.evaluate(
        "pinney-residual", trajectory.residual_max, _PINNEY_TOLERANCE,
        n_nodes=len(trajectory.times), t_end=t_end)]

    sector_pairs = []
    for spec in config.states:
        label = state_label(spec)
        if config.dimension == "1d":
            model_1d, spec_1d = config.model, spec
            context = {}
            grid = _resolve_grid_1d(config, model_1d, [spec_1d], trajectory)
        else:
            # the [grid] section describes the 3d eval tensor grid; the
            # radial-equivalent 1d checks always get the oracle's own grid
            model_1d, spec_1d = _radial_equivalent(config.model, spec)
            context = {"radial_equivalent": True}
            grid = oracle.auto_grid(model_1d, [spec_1d], trajectory)
        report = oracle.schrodinger_residual_1d(
            model_1d, spec_1d, scenario, trajectory, t_samples, grid,
            tolerance=_RESIDUAL_TOLERANCE)
        reports.append(dataclasses.replace(
            report, name=f"schrodinger-residual[{label}]",
            context={**report.context, **context}))
        report = oracle.invariant_eigen_residual_1d(
            model_1d, spec_1d, trajectory, t_samples, grid, tolerance=_RESIDUAL_TOLERANCE)
        reports.append(dataclasses.replace(
            report, name=f"invariant-eigenresidual[{label}]",
            context={**report.context, **context}))
        key = (model_1d.mu, spec_1d.s)
        if key not in [k for k, _, _ in sector_pairs]:
            sector_pairs.append((key, model_1d, label))

    for (mu_val, s), model_1d, label in sector_pairs:
        suffix = f"s{'+' if s == 1 else '-'}" if config.dimension == "1d" else label
        report = oracle.gram_orthonormality(model_1d, s, tolerance=_GRAM_TOLERANCE)
        reports.append(dataclasses.replace(report, name=f"gram-orthonormality[{suffix}]"))

    commutator_model, commutator_s = (sector_pairs[0][1], sector_pairs[0][0][1])
    bump_grid = oracle.SpatialGrid1D(x_max=6.0, n_points=1200)
    bump = oracle.gaussian_bump(bump_grid)
    for pair in ("t1-t2", "t2-t3", "t1-t3"):
        reports.append(oracle.commutator_check(pair, bump, commutator_model, commutator_s))

    if config.dimension == "3d":
        for spec in config.states:
            label = state_label(spec)
            for which in ("azimuthal", "polar"):
                report = oracle.angular_residual(config.model, spec, which,
                                                 tolerance=_ANGULAR_TOLERANCE)
                reports.append(dataclasses.replace(report, name=f"{report.name}[{label}]"))

    if config.propagator is not None and config.dimension == "1d":
        reports.append(_drift_report(config, trajectory))
    return reports


def _drift_report(config: RunConfig, trajectory: PinneyTrajectory) -> oracle.ResidualReport:
    """Propagate (psi_0 + psi_1)/sqrt(2) in the first state's sector and
    measure the invariant expectation drift."""
    model = config.model
    s = config.states[0].s
    specs = [StateSpec1D(n=0, s=s), StateSpec1D(n=1, s=s)]
    grid = _resolve_grid_1d(config, model, specs, trajectory)
    at0 = trajectory.at(0.0)
    values = (oracle.sample_gauged_state(model, specs[0], grid, at0).values
              + oracle.sample_gauged_state(model, specs[1], grid, at0).values)
    initial = oracle.DiscreteField(grid=grid, values=values, time=0.0)
    norm = math.sqrt(oracle.weighted_inner_product(initial, initial, model).real)
    initial.values /= norm
    prop = config.propagator
    stride = max(1, prop.n_steps // 200)
    series = (field for index, field in enumerate(
        oracle.crank_nicolson_propagate(initial, model, s, config.scenario, prop.dt, prop.n_steps))
        if index % stride == 0 or index == prop.n_steps)
    return oracle.invariant_expectation_drift(series, model, s, trajectory,
                                              tolerance=_DRIFT_TOLERANCE)


def run_verify(config: RunConfig, out_dir: Path, rho_scale: float | None = None) -> int:
    """Run the fixed check roster, write verify.json, exit 0 iff all passed.

    rho_scale is a test hook: it rescales the auxiliary solution before the
    checks run, which must drive the Schrodinger residuals above tolerance
    (negative control for the whole suite).
    """
    trajectory = _solve_trajectory(config)
    if rho_scale is not None:
        trajectory = _scaled_trajectory(trajectory, rho_scale)
    reports = _verify_reports(config, trajectory)
    payload = [dataclasses.asdict(report) for report in reports]
    _write_json(out_dir / "verify.json", payload)
    return 0 if all(report.passed for report in reports) else 4


def run_propagate(config: RunConfig, out_dir: Path) -> int:
    """Crank-Nicolson propagation of the first state; write fidelity.csv."""
    if config.propagator is None:
        raise ConfigError("'propagator' section is required for the propagate subcommand")
    model = config.model
    spec = config.states[0]
    trajectory = _solve_trajectory(config)
    grid = _resolve_grid_1d(config, model, [spec], trajectory)
    initial = oracle.sample_gauged_state(model, spec, grid, trajectory.at(0.0))
    norm = math.sqrt(oracle.weighted_inner_product(initial, initial, model).real)
    initial.values /= norm
    prop = config.propagator
    stride = max(1, prop.n_steps // 1000)

    rows = []
    norm0 = None
    drift0 = None
    for index, field in enumerate(oracle.crank_nicolson_propagate(
            initial, model, spec.s, config.scenario, prop.dt, prop.n_steps)):
        if index % stride != 0 and index != prop.n_steps:
            continue
        at = trajectory.at(field.time)
        norm_sq = oracle.weighted_inner_product(field, field, model).real
        i_field = oracle.apply_invariant_1d(field, model, spec.s, at)
        expectation = oracle.weighted_inner_product(field, i_field, model).real / norm_sq
        if norm0 is None:
            norm0, drift0 = math.sqrt(norm_sq), expectation
        reference = oracle.sample_gauged_state(model, spec, grid, at)
        ref_norm = math.sqrt(oracle.weighted_inner_product(reference, reference, model).real)
        reference.values /= ref_norm
        overlap = abs(oracle.weighted_inner_product(reference, field, model)) / math.sqrt(norm_sq)
        rows.append((field.time, min(overlap, 1.0),
                     abs(math.sqrt(norm_sq) - norm0) / norm0,
                     abs(expectation - drift0) / abs(drift0)))
    _write_csv(out_dir / "fidelity.csv", "t,fidelity,norm_drift,invariant_drift", rows)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dunklosc",
        description="Exact Dunkl oscillator states with time-dependent mass and "
                    "frequency, plus independent numerical verification.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("solve-pinney", "integrate the auxiliary equation and write pinney.csv"),
            ("eval", "tabulate wavefunctions and eigenvalues at the sample times"),
            ("verify", "run the residual check roster and write verify.json"),
            ("propagate", "Crank-Nicolson propagation with fidelity tracking")):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", required=True, help="path to the TOML run config")
        sub.add_argument("--out", default=None, help="output directory override")
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        config = parse_config(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out) if args.out else Path(config.outputs.directory)
    out_dir.mkdir(parents=True, exist_ok=True)

    handlers = {
        "solve-pinney": run_solve_pinney,
        "eval": run_eval,
        "verify": run_verify,
        "propagate": run_propagate,
    }
    try:
        return handlers[args.command](config, out_dir)
    except (PinneySingularityError, PinneyStiffnessError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        # precondition violations from the numerical layer are config mistakes
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
