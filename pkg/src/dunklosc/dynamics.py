"""Time-dependent mass/frequency profiles, the Ermakov-Pinney auxiliary
solver, and the accumulated phase base integral.

The auxiliary equation

    rho'' + (M'/M) rho' + omega^2 rho = 1 / (M^2 rho^3)

is integrated adaptively (DOP853) as a first-order system with the phase base
Theta' = 1/(M rho^2) carried as a third component, so Theta inherits
integrator-grade accuracy instead of post-hoc quadrature error. The dense
output is resampled onto a uniform node grid; cubic interpolants serve
evaluation between nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

__all__ = [
    "TimeProfile",
    "Scenario",
    "PinneyTrajectory",
    "TrajectoryPoint",
    "InvariantCoefficients",
    "PinneySingularityError",
    "PinneyStiffnessError",
    "evaluate_profile",
    "equilibrium_rho",
    "solve_ermakov_pinney",
    "invariant_coefficients",
    "phase_base",
]

_PROFILE_KINDS = ("constant", "linear", "exponential", "sinusoidal", "tabulated")
_POSITIVITY_SAMPLES = 1001
_RHO_FLOOR = 1e-8


class PinneySingularityError(RuntimeError):
    """The auxiliary solution collapsed below the positivity floor."""

    def __init__(self, t: float):
        super().__init__(f"auxiliary solution fell below {_RHO_FLOOR} at t = {t:.6g}")
        self.time = t


class PinneyStiffnessError(RuntimeError):
    """The adaptive integrator failed (step-size underflow or solver error)."""


@dataclass(frozen=True)
class TimeProfile:
    """Parametric positive profile M(t) or omega(t).

    kinds: constant c; linear c0 + rate*t; exponential c0*exp(rate*t);
    sinusoidal c0*(1 + amplitude*cos(angular_rate*t)); tabulated cubic spline
    through (times, values) with strictly increasing times.
    """

    kind: str
    value: float = 1.0
    rate: float = 0.0
    amplitude: float = 0.0
    angular_rate: float = 0.0
    times: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in _PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}; expected one of {_PROFILE_KINDS}")
        if self.kind == "tabulated":
            t = np.asarray(self.times, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if t.size < 4:
                raise ValueError("tabulated profile needs at least 4 samples")
            if t.size != v.size:
                raise ValueError("tabulated times and values must have equal length")
            if np.any(np.diff(t) <= 0.0):
                raise ValueError("tabulated times must be strictly increasing")

    @classmethod
    def constant(cls, c: float) -> "TimeProfile":
        return cls(kind="constant", value=c)

    @classmethod
    def linear(cls, c0: float, rate: float) -> "TimeProfile":
        return cls(kind="linear", value=c0, rate=rate)

    @classmethod
    def exponential(cls, c0: float, rate: float) -> "TimeProfile":
        return cls(kind="exponential", value=c0, rate=rate)

    @classmethod
    def sinusoidal(cls, c0: float, amplitude: float, angular_rate: float) -> "TimeProfile":
        return cls(kind="sinusoidal", value=c0, amplitude=amplitude, angular_rate=angular_rate)

    @classmethod
    def tabulated(cls, times, values) -> "TimeProfile":
        return cls(kind="tabulated", times=tuple(float(t) for t in times),
                   values=tuple(float(v) for v in values))

    def _spline(self) -> CubicSpline:
        # rebuilt on demand; frozen dataclass keeps no mutable cache
        return CubicSpline(np.asarray(self.times), np.asarray(self.values))


def evaluate_profile(profile: TimeProfile, t):
    """Profile value and time derivative at t (scalar or array).

    Parametric kinds use exact analytic derivatives; tabulated profiles use
    the cubic-spline derivative. Tabulated evaluation outside the table range
    raises ValueError.
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    if profile.kind == "constant":
        v = np.full_like(t, profile.value, dtype=float)
        d = np.zeros_like(t, dtype=float)
    elif profile.kind == "linear":
        v = profile.value + profile.rate * t
        d = np.full_like(t, profile.rate, dtype=float)
    elif profile.kind == "exponential":
        v = profile.value * np.exp(profile.rate * t)
        d = profile.rate * v
    elif profile.kind == "sinusoidal":
        v = profile.value * (1.0 + profile.amplitude * np.cos(profile.angular_rate * t))
        d = -profile.value * profile.amplitude * profile.angular_rate * np.sin(profile.angular_rate * t)
    else:
        lo, hi = profile.times[0], profile.times[-1]
        if np.any(t < lo - 1e-12) or np.any(t > hi + 1e-12):
            raise ValueError(f"time {t} outside tabulated range [{lo}, {hi}]")
        sp = profile._spline()
        v = sp(t)
        d = sp(t, 1)
    if scalar:
        return float(v), float(d)
    return v, d


@dataclass(frozen=True)
class Scenario:
    """Mass/frequency profiles with hbar and the time span [0, t1].

    Both profiles must stay strictly positive over the span; enforced by
    dense sampling at construction (a dip between samples passes silently,
    a documented limitation of the sampling check).
    """

    mass: TimeProfile
    omega: TimeProfile
    hbar: float = 1.0
    t_span: tuple = (0.0, 1.0)

    def __post_init__(self):
        t0, t1 = self.t_span
        if t0 != 0.0:
            raise ValueError(f"time span must start at 0, got {t0}")
        if not t1 > t0:
            raise ValueError(f"time span end must exceed start, got {self.t_span}")
        if not self.hbar > 0.0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        ts = np.linspace(t0, t1, _POSITIVITY_SAMPLES)
        for name, profile in (("mass", self.mass), ("omega", self.omega)):
            v, _ = evaluate_profile(profile, ts)
            if np.any(v <= 0.0):
                bad = float(ts[np.argmax(v <= 0.0)])
                raise ValueError(f"{name} profile is non-positive near t = {bad:.6g}")


@dataclass(frozen=True)
class TrajectoryPoint:
    """Auxiliary state (rho, rho', Theta) plus profile values at one time."""

    t: float
    rho: float
    rho_dot: float
    theta: float
    mass: float
    omega: float


@dataclass
class PinneyTrajectory:
    """Dense solution of the auxiliary equation with the phase base integral.

    times/rho/rho_dot/theta are uniform node arrays; mass/omega are the
    profile values at the nodes (for serialization); residual_max is the
    back-substitution residual of the auxiliary equation measured on interior
    nodes with rho'' taken from a finite difference of the dense rho' output.
    """

    times: np.ndarray
    rho: np.ndarray
    rho_dot: np.ndarray
    theta: np.ndarray
    mass: np.ndarray
    omega: np.ndarray
    residual_max: float
    _rho_spline: CubicSpline = field(repr=False)
    _rho_dot_spline: CubicSpline = field(repr=False)
    _theta_spline: CubicSpline = field(repr=False)
    _mass_spline: CubicSpline = field(repr=False)
    _omega_spline: CubicSpline = field(repr=False)

    @property
    def t_span(self) -> tuple:
        return (float(self.times[0]), float(self.times[-1]))

    def _check_t(self, t: float) -> float:
        t = float(t)
        t0, t1 = self.t_span
        if t < t0 - 1e-12 or t > t1 + 1e-12:
            raise ValueError(f"time {t} outside trajectory span [{t0}, {t1}]")
        return min(max(t, t0), t1)

    def at(self, t: float) -> TrajectoryPoint:
        t = self._check_t(t)
        return TrajectoryPoint(
            t=t,
            rho=float(self._rho_spline(t)),
            rho_dot=float(self._rho_dot_spline(t)),
            theta=float(self._theta_spline(t)),
            mass=float(self._mass_spline(t)),
            omega=float(self._omega_spline(t)),
        )


def equilibrium_rho(M0: float, omega0: float) -> float:
    """Stationary auxiliary solution (M0*omega0)^(-1/2) for constant profiles."""
    if not (M0 > 0.0 and omega0 > 0.0):
        raise ValueError(f"equilibrium_rho requires positive inputs, got {M0}, {omega0}")
    return 1.0 / np.sqrt(M0 * omega0)


def solve_ermakov_pinney(
    scenario: Scenario,
    rho0: float | None = None,
    rho_dot0: float = 0.0,
    rel_tol: float = 1e-12,
    abs_tol: float = 1e-12,
    n_nodes: int = 2001,
) -> PinneyTrajectory:
    """Integrate the auxiliary equation over the scenario span.

    Defaults start at the equilibrium of the initial profile values with zero
    slope, which reproduces the static oscillator exactly under constant
    profiles. Theta is co-integrated. Dense output is resampled onto n_nodes
    uniform nodes (n_nodes >= 2000 enforced).
    """
    if not (1e-13 <= rel_tol <= 1e-3 and 1e-13 <= abs_tol <= 1e-3):
        raise ValueError("tolerances must lie in [1e-13, 1e-3]")
    if n_nodes < 2000:
        raise ValueError(f"n_nodes must be at least 2000, got {n_nodes}")
    t0, t1 = scenario.t_span
    if rho0 is None:
        m0, _ = evaluate_profile(scenario.mass, t0)
        w0, _ = evaluate_profile(scenario.omega, t0)
        rho0 = equilibrium_rho(m0, w0)
    if not rho0 > 0.0:
        raise ValueError(f"rho0 must be positive, got {rho0}")

    mass, omega = scenario.mass, scenario.omega

    def rhs(t, y):
        m, m_dot = evaluate_profile(mass, t)
        w, _ = evaluate_profile(omega, t)
        rho, rho_dot = y[0], y[1]
        return (
            rho_dot,
            -(m_dot / m) * rho_dot - w * w * rho + 1.0 / (m * m * rho ** 3),
            1.0 / (m * rho * rho),
        )

    def collapse(t, y):
        return y[0] - _RHO_FLOOR

    collapse.terminal = True
    collapse.direction = -1.0

    sol = solve_ivp(
        rhs,
        (t0, t1),
        (float(rho0), float(rho_dot0), 0.0),
        method="DOP853",
        rtol=rel_tol,
        atol=abs_tol,
        # cap the step so the dense-output polynomial (one order below the
        # integrator) stays well under the residual tolerance
        max_step=(t1 - t0) / 200.0,
        dense_output=True,
        events=collapse,
    )
    if sol.t_events[0].size > 0:
        raise PinneySingularityError(float(sol.t_events[0][0]))
    if not sol.success:
        raise PinneyStiffnessError(f"auxiliary integration failed: {sol.message}")

    times = np.linspace(t0, t1, n_nodes)
    dense = sol.sol(times)
    rho, rho_dot, theta = dense[0], dense[1], dense[2]
    m, m_dot = evaluate_profile(mass, times)
    w, _ = evaluate_profile(omega, times)

    # back-substitution residual; rho'' from a centered difference of the
    # dense rho' output, independent of the integrator's internal rhs
    delta = 1e-6 * max(t1 - t0, 1.0)
    ti = times[1:-1]
    rho_dd = (sol.sol(ti + delta)[1] - sol.sol(ti - delta)[1]) / (2.0 * delta)
    mi, mi_dot = m[1:-1], m_dot[1:-1]
    wi, ri, ri_dot = w[1:-1], rho[1:-1], rho_dot[1:-1]
    resid = rho_dd + (mi_dot / mi) * ri_dot + wi * wi * ri - 1.0 / (mi * mi * ri ** 3)
    scale = np.maximum(1.0, np.abs(wi * wi * ri))
    residual_max = float(np.max(np.abs(resid) / scale))

    return PinneyTrajectory(
        times=times,
        rho=rho,
        rho_dot=rho_dot,
        theta=theta,
        mass=m,
        omega=w,
        residual_max=residual_max,
        _rho_spline=CubicSpline(times, rho),
        _rho_dot_spline=CubicSpline(times, rho_dot),
        _theta_spline=CubicSpline(times, theta),
        _mass_spline=CubicSpline(times, m),
        _omega_spline=CubicSpline(times, w),
    )


@dataclass(frozen=True)
class InvariantCoefficients:
    """Quadratic-form coefficients (alpha, beta, gamma) of the invariant."""

    alpha: float
    beta: float
    gamma: float

    @property
    def determinant(self) -> float:
        """alpha*beta - gamma^2, identically 1 for an exact auxiliary solution."""
        return self.alpha * self.beta - self.gamma * self.gamma

    @classmethod
    def from_point(cls, point: TrajectoryPoint) -> "InvariantCoefficients":
        return cls(alpha=point.rho ** 2,
                   beta=1.0 / point.rho ** 2 + (point.mass * point.rho_dot) ** 2,
                   gamma=-point.mass * point.rho * point.rho_dot)


def invariant_coefficients(trajectory: PinneyTrajectory, scenario: Scenario, t: float) -> InvariantCoefficients:
    """(alpha, beta, gamma) = (rho^2, 1/rho^2 + M^2 rho'^2, -M rho rho')."""
    p = trajectory.at(t)
    m, _ = evaluate_profile(scenario.mass, t)
    return InvariantCoefficients(
        alpha=p.rho ** 2,
        beta=1.0 / p.rho ** 2 + (m * p.rho_dot) ** 2,
        gamma=-m * p.rho * p.rho_dot,
    )


def phase_base(trajectory: PinneyTrajectory, t: float) -> float:
    """Accumulated integral of 1/(M rho^2) from 0 to t (cubic interpolation)."""
    t = trajectory._check_t(t)
    return float(trajectory._theta_spline(t))
