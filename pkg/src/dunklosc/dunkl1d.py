"""Exact parity-resolved states of the 1D Dunkl harmonic oscillator with
time-dependent mass and frequency.

In a fixed parity sector s the Dunkl Hamiltonian reduces to a scalar operator
with an inverse-square potential of strength nu^2 - 1/4, nu = mu - s/2. The
time dependence enters only through the auxiliary solution (rho, rho', Theta)
carried by a PinneyTrajectory: each state is a generalized Laguerre profile in
u = x^2/(hbar rho^2), dressed with a rho-dependent chirp and the accumulated
phase -(2n + 1 + nu) Theta(t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .dynamics import PinneyTrajectory, TrajectoryPoint, phase_base

__all__ = [
    "Dunkl1DModel",
    "StateSpec1D",
    "WavefunctionSample",
    "nu",
    "eigenvalue_1d",
    "normalization_constant_1d",
    "eigenfunction_1d",
    "phase_1d",
    "wavefunction_1d",
    "dunkl_weight_1d",
]


@dataclass(frozen=True)
class Dunkl1DModel:
    """Wigner deformation parameter and hbar."""

    mu: float
    hbar: float = 1.0

    def __post_init__(self):
        if not self.mu > -0.5:
            raise ValueError(f"mu must exceed -1/2 for normalizability, got {self.mu}")
        if not self.hbar > 0.0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class StateSpec1D:
    """Laguerre index n >= 0 and parity s = +1 (even) or -1 (odd)."""

    n: int
    s: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 0):
            raise ValueError(f"n must be a non-negative integer, got {self.n}")
        if self.s not in (1, -1):
            raise ValueError(f"s must be +1 or -1, got {self.s}")


@dataclass(frozen=True)
class WavefunctionSample:
    """Complex value(s) and |value|^2 at the sample point(s)."""

    value: complex
    modulus_sq: float


def nu(model: Dunkl1DModel, s: int) -> float:
    """Effective sector index mu - s/2."""
    if s not in (1, -1):
        raise ValueError(f"s must be +1 or -1, got {s}")
    return model.mu - 0.5 * s


def eigenvalue_1d(model: Dunkl1DModel, spec: StateSpec1D) -> float:
    """Invariant eigenvalue hbar (2n + 1 + nu)."""
    return model.hbar * (2 * spec.n + 1 + nu(model, spec.s))


def normalization_constant_1d(model: Dunkl1DModel, spec: StateSpec1D) -> float:
    """sqrt(n! / (hbar^(nu+1) Gamma(n + nu + 1))), computed in log space."""
    v = nu(model, spec.s)
    log_n_sq = (specfun.log_gamma(spec.n + 1.0)
                - (v + 1.0) * math.log(model.hbar)
                - specfun.log_gamma(spec.n + v + 1.0))
    return math.exp(0.5 * log_n_sq)


def _core(model: Dunkl1DModel, spec: StateSpec1D, x, at: TrajectoryPoint):
    """Shared assembly: N p_s(x) rho^-(nu+1) L_n^nu(u) exp((i M rho rho' - 1) u / 2)."""
    v = nu(model, spec.s)
    rho, rho_dot, mass = at.rho, at.rho_dot, at.mass
    u = x * x / (model.hbar * rho * rho)
    norm = normalization_constant_1d(model, spec)
    core = norm * rho ** (-(v + 1.0)) * specfun.laguerre(spec.n, v, u).value
    if spec.s == -1:
        core = core * x
    return core * np.exp((1j * mass * rho * rho_dot - 1.0) * u / 2.0)


def eigenfunction_1d(model: Dunkl1DModel, spec: StateSpec1D, x, at: TrajectoryPoint) -> WavefunctionSample:
    """Invariant eigenfunction at the trajectory point, without the phase.

    The parity prefactor is p_+1(x) = 1, p_-1(x) = x, the real-valued choice
    with the reflection relation value(-x) = s * value(x). Accepts scalar or
    array x.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    val = _core(model, spec, x, at)
    if scalar:
        val = complex(val)
        return WavefunctionSample(value=val, modulus_sq=abs(val) ** 2)
    return WavefunctionSample(value=val, modulus_sq=np.abs(val) ** 2)


def phase_1d(model: Dunkl1DModel, spec: StateSpec1D, trajectory: PinneyTrajectory, t: float) -> float:
    """Accumulated quantum phase -(2n + 1 + nu) Theta(t)."""
    return -(2 * spec.n + 1 + nu(model, spec.s)) * phase_base(trajectory, t)


def wavefunction_1d(model: Dunkl1DModel, spec: StateSpec1D, x, trajectory: PinneyTrajectory, t: float) -> WavefunctionSample:
    """Full solution exp(i eta(t)) times the invariant eigenfunction."""
    at = trajectory.at(t)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    val = np.exp(1j * phase_1d(model, spec, trajectory, t)) * _core(model, spec, x, at)
    if scalar:
        val = complex(val)
        return WavefunctionSample(value=val, modulus_sq=abs(val) ** 2)
    return WavefunctionSample(value=val, modulus_sq=np.abs(val) ** 2)


def dunkl_weight_1d(model: Dunkl1DModel, x):
    """Measure weight |x|^(2 mu); 0^0 is taken as 1 (mu = 0 limit)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    with np.errstate(divide="ignore"):
        w = np.abs(x) ** (2.0 * model.mu)
    return float(w) if scalar else w
