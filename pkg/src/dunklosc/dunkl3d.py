"""Exact solutions of the 3D isotropic time-dependent Dunkl oscillator in
spherical coordinates.

The problem separates into an azimuthal Jacobi factor, a polar Jacobi factor,
and a radial generalized-Laguerre factor linked by the separation constants
k^2 = 4m(m + mu1 + mu2) and q^2 = 4(l+m)(l+m+mu1+mu2+mu3+1/2). The effective
radial index sigma = sqrt(1/4 + delta(delta-1) + q^2), delta = mu1+mu2+mu3+1,
fixes the spectrum hbar(2 n_r + sigma + 1). Reflection operators are never
materialized: states carry a fixed parity triple (s1, s2, s3) under which the
three reflections act as scalars, and (1 - R_i) contributes 2 a_i with
a_i = (1 - s_i)/2.

Normalization constants are computed by exact Gauss-Jacobi / Gauss-Laguerre
quadrature at first use and cached per (model, state).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre, roots_jacobi

from . import specfun
from .dynamics import PinneyTrajectory, phase_base

__all__ = [
    "Dunkl3DModel",
    "StateSpec3D",
    "SeparationConstants",
    "separation_constants",
    "eigenvalue_3d",
    "azimuthal_eigenfunction",
    "polar_eigenfunction",
    "radial_eigenfunction",
    "wavefunction_3d",
    "phase_3d",
    "angular_weight",
    "radial_weight",
    "admissible_m_values",
    "admissible_l_values",
    "angular_factor_derivatives",
]

_HALF_INT_TOL = 1e-9


@dataclass(frozen=True)
class Dunkl3DModel:
    """Wigner parameter triple (mu1, mu2, mu3) and hbar."""

    mu: tuple
    hbar: float = 1.0

    def __post_init__(self):
        mu = tuple(float(v) for v in self.mu)
        object.__setattr__(self, "mu", mu)
        if len(mu) != 3:
            raise ValueError(f"mu must have three components, got {len(mu)}")
        if any(v < 0.0 for v in mu):
            raise ValueError(f"each mu component must be non-negative, got {mu}")
        if not self.hbar > 0.0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @property
    def delta(self) -> float:
        return self.mu[0] + self.mu[1] + self.mu[2] + 1.0


def _check_ladder(value: float, name: str, odd: bool, rule: str) -> None:
    two = 2.0 * value
    if abs(two - round(two)) > _HALF_INT_TOL:
        raise ValueError(f"{name} must be an integer or half-integer, got {value}")
    if int(round(two)) % 2 != (1 if odd else 0):
        raise ValueError(f"{name} = {value} violates the ladder rule: {rule}")


@dataclass(frozen=True)
class StateSpec3D:
    """Radial index n_r, azimuthal/polar ladder numbers m and l, parity triple.

    m runs over half-integers when s1*s2 = -1 and integers otherwise; l runs
    over half-integers when s3 = -1 and integers otherwise. The derived Jacobi
    degrees m - (a1+a2)/2 and l - a3/2 must be non-negative integers.
    """

    n_r: int
    m: float
    l: float
    parity: tuple

    def __post_init__(self):
        parity = tuple(int(s) for s in self.parity)
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "l", float(self.l))
        if not (isinstance(self.n_r, int) and self.n_r >= 0):
            raise ValueError(f"n_r must be a non-negative integer, got {self.n_r}")
        if len(parity) != 3 or any(s not in (1, -1) for s in parity):
            raise ValueError(f"parity must be a triple of +1/-1, got {self.parity}")
        s1, s2, s3 = parity
        _check_ladder(self.m, "m", odd=(s1 * s2 == -1),
                      rule="m is half-integer iff s1*s2 = -1, integer otherwise")
        _check_ladder(self.l, "l", odd=(s3 == -1),
                      rule="l takes positive half-integer values iff s3 = -1, integer otherwise")
        if self.azimuthal_degree < 0:
            raise ValueError(
                f"m = {self.m} too small for parity {parity}: Jacobi degree m - (a1+a2)/2 negative")
        if self.polar_degree < 0:
            raise ValueError(
                f"l = {self.l} too small for parity {parity}: Jacobi degree l - a3/2 negative")

    @property
    def a(self) -> tuple:
        """(a1, a2, a3) with a_i = (1 - s_i)/2."""
        return tuple((1 - s) // 2 for s in self.parity)

    @property
    def azimuthal_degree(self) -> int:
        a1, a2, _ = self.a
        return int(round(self.m - 0.5 * (a1 + a2)))

    @property
    def polar_degree(self) -> int:
        a3 = self.a[2]
        return int(round(self.l - 0.5 * a3))


@dataclass(frozen=True)
class SeparationConstants:
    """Azimuthal eigenvalue k^2, polar eigenvalue q^2, radial index sigma."""

    k_sq: float
    q_sq: float
    sigma: float


def separation_constants(model: Dunkl3DModel, spec: StateSpec3D) -> SeparationConstants:
    """k^2, q^2 and the positive root sigma fixed by (m, l, mu)."""
    mu1, mu2, mu3 = model.mu
    m, l = spec.m, spec.l
    k_sq = 4.0 * m * (m + mu1 + mu2)
    q_sq = 4.0 * (l + m) * (l + m + mu1 + mu2 + mu3 + 0.5)
    d = model.delta
    sigma = math.sqrt(0.25 + d * (d - 1.0) + q_sq)
    return SeparationConstants(k_sq=k_sq, q_sq=q_sq, sigma=sigma)


def eigenvalue_3d(model: Dunkl3DModel, spec: StateSpec3D) -> float:
    """Invariant eigenvalue hbar (2 n_r + sigma + 1)."""
    return model.hbar * (2 * spec.n_r + separation_constants(model, spec).sigma + 1.0)


def admissible_m_values(s1: int, s2: int, count: int = 3) -> list:
    """First `count` admissible m for the azimuthal parity pair."""
    base = 0.5 * ((1 - s1) // 2 + (1 - s2) // 2)
    return [base + j for j in range(count)]


def admissible_l_values(s3: int, count: int = 3) -> list:
    """First `count` admissible l for the polar parity."""
    base = 0.5 * ((1 - s3) // 2)
    return [base + j for j in range(count)]


def _azimuthal_indices(model: Dunkl3DModel, spec: StateSpec3D):
    a1, a2, _ = spec.a
    alpha = model.mu[1] + a2 - 0.5
    beta = model.mu[0] + a1 - 0.5
    return spec.azimuthal_degree, alpha, beta


def _polar_indices(model: Dunkl3DModel, spec: StateSpec3D):
    a3 = spec.a[2]
    alpha = 2.0 * spec.m + model.mu[0] + model.mu[1]
    beta = model.mu[2] + a3 - 0.5
    return spec.polar_degree, alpha, beta


@lru_cache(maxsize=None)
def _azimuthal_norm(model: Dunkl3DModel, spec: StateSpec3D) -> float:
    """C with int_0^2pi Phi^2 |sin|^(2 mu2) |cos|^(2 mu1) dphi = 1.

    The integrand has period pi, so the integral is 4 times the quarter-period
    one; substituting X = cos 2phi there gives the Gauss-Jacobi form
    C^2 2^-(alpha+beta) int (1-X)^alpha (1+X)^beta P_j(X)^2 dX.
    """
    j, alpha, beta = _azimuthal_indices(model, spec)
    nodes, weights = roots_jacobi(j + 1, alpha, beta)
    h = float(np.sum(weights * specfun.jacobi(j, alpha, beta, nodes).value ** 2))
    return 1.0 / math.sqrt(2.0 ** (-(alpha + beta)) * h)


@lru_cache(maxsize=None)
def _polar_norm(model: Dunkl3DModel, spec: StateSpec3D) -> float:
    """C with int_0^pi Theta^2 |sin|^(2 mu1 + 2 mu2) |cos|^(2 mu3) sin dtheta = 1."""
    j, alpha, beta = _polar_indices(model, spec)
    nodes, weights = roots_jacobi(j + 1, alpha, beta)
    h = float(np.sum(weights * specfun.jacobi(j, alpha, beta, nodes).value ** 2))
    return 1.0 / math.sqrt(2.0 ** (-(alpha + beta + 1.0)) * h)


@lru_cache(maxsize=None)
def _radial_norm(model: Dunkl3DModel, spec: StateSpec3D) -> float:
    """C with int_0^inf Y(kappa)^2 dkappa = 1 (reduced radial convention)."""
    sigma = separation_constants(model, spec).sigma
    nodes, weights = roots_genlaguerre(spec.n_r + 1, sigma)
    h = float(np.sum(weights * specfun.laguerre(spec.n_r, sigma, nodes).value ** 2))
    return math.sqrt(2.0 / (model.hbar ** (sigma + 1.0) * h))


def azimuthal_eigenfunction(model: Dunkl3DModel, spec: StateSpec3D, phi):
    """Normalized azimuthal factor C cos^a1 sin^a2 P_j^(alpha,beta)(cos 2phi)."""
    phi = np.asarray(phi, dtype=float)
    scalar = phi.ndim == 0
    j, alpha, beta = _azimuthal_indices(model, spec)
    a1, a2, _ = spec.a
    val = _azimuthal_norm(model, spec) * specfun.jacobi(j, alpha, beta, np.cos(2.0 * phi)).value
    if a1:
        val = val * np.cos(phi)
    if a2:
        val = val * np.sin(phi)
    return float(val) if scalar else val


def polar_eigenfunction(model: Dunkl3DModel, spec: StateSpec3D, theta):
    """Normalized polar factor C cos^a3 sin^2m P_j^(alpha,beta)(cos 2theta)."""
    theta = np.asarray(theta, dtype=float)
    scalar = theta.ndim == 0
    if np.any(theta < -1e-12) or np.any(theta > math.pi + 1e-12):
        raise ValueError("theta must lie in [0, pi]")
    j, alpha, beta = _polar_indices(model, spec)
    a3 = spec.a[2]
    two_m = int(round(2.0 * spec.m))
    val = _polar_norm(model, spec) * specfun.jacobi(j, alpha, beta, np.cos(2.0 * theta)).value
    if a3:
        val = val * np.cos(theta)
    if two_m:
        val = val * np.sin(theta) ** two_m
    return float(val) if scalar else val


def radial_eigenfunction(model: Dunkl3DModel, spec: StateSpec3D, kappa):
    """Reduced radial factor C kappa^(sigma+1/2) e^(-kappa^2/2hbar) L_n^sigma(kappa^2/hbar)."""
    kappa = np.asarray(kappa, dtype=float)
    scalar = kappa.ndim == 0
    if np.any(kappa < 0.0):
        raise ValueError("kappa must be non-negative")
    sigma = separation_constants(model, spec).sigma
    u = kappa * kappa / model.hbar
    val = (_radial_norm(model, spec) * kappa ** (sigma + 0.5)
           * np.exp(-0.5 * u) * specfun.laguerre(spec.n_r, sigma, u).value)
    return float(val) if scalar else val


def phase_3d(model: Dunkl3DModel, spec: StateSpec3D, trajectory: PinneyTrajectory, t: float) -> float:
    """Accumulated quantum phase -(2 n_r + sigma + 1) Theta(t)."""
    return -(2 * spec.n_r + separation_constants(model, spec).sigma + 1.0) * phase_base(trajectory, t)


def wavefunction_3d(model: Dunkl3DModel, spec: StateSpec3D, r, theta, phi,
                    trajectory: PinneyTrajectory, t: float):
    """Full normalized solution at (r, theta, phi, t).

    Assembled as exp(i eta) exp(i M rho' r^2 / (2 hbar rho)) rho^(-1/2) r^(-delta)
    Y(r/rho) Theta(theta) Phi(phi). The rho^(-1/2) exponent is fixed by
    requiring unit weighted norm at every t: the radial integral contributes
    exactly one factor rho under the substitution kappa = r/rho (regression
    tested). Broadcasts over array arguments.
    """
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0 and np.ndim(theta) == 0 and np.ndim(phi) == 0
    if np.any(r <= 0.0):
        raise ValueError("r must be positive")
    at = trajectory.at(t)
    rho, rho_dot, mass = at.rho, at.rho_dot, at.mass
    chirp = np.exp(1j * mass * rho_dot * r * r / (2.0 * model.hbar * rho))
    val = (np.exp(1j * phase_3d(model, spec, trajectory, t)) * chirp
           * rho ** (-0.5) * r ** (-model.delta)
           * radial_eigenfunction(model, spec, r / rho)
           * polar_eigenfunction(model, spec, theta)
           * azimuthal_eigenfunction(model, spec, phi))
    return complex(val) if scalar else val


def angular_weight(model: Dunkl3DModel, theta, phi):
    """Angular part of the orthogonality measure (includes the sin theta Jacobian)."""
    mu1, mu2, mu3 = model.mu
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    return (np.abs(st) ** (2.0 * (mu1 + mu2)) * np.abs(ct) ** (2.0 * mu3)
            * np.abs(sp) ** (2.0 * mu2) * np.abs(cp) ** (2.0 * mu1) * st)


def radial_weight(model: Dunkl3DModel, r):
    """Radial part r^(2 + 2(mu1+mu2+mu3)) of the orthogonality measure."""
    mu1, mu2, mu3 = model.mu
    return np.asarray(r, dtype=float) ** (2.0 + 2.0 * (mu1 + mu2 + mu3))


def _jacobi_derivative_values(j: int, alpha: float, beta: float, x, order: int):
    """d-th derivative of the degree-j Jacobi polynomial, d <= 2."""
    x = np.asarray(x, dtype=float)
    if order == 0:
        return specfun.jacobi(j, alpha, beta, x).value
    if order == 1:
        return specfun.jacobi(j, alpha, beta, x).derivative
    if j < 2:
        return np.zeros_like(x)
    return (0.5 * (j + alpha + beta + 1.0)
            * specfun.jacobi(j - 1, alpha + 1.0, beta + 1.0, x).derivative)


def _differentiate_terms(terms: dict) -> dict:
    """One angle derivative of sum coef cos^p sin^q P^(d)(cos 2 angle)."""
    out = {}

    def add(key, coef):
        out[key] = out.get(key, 0.0) + coef

    for (p, q, d), c in terms.items():
        if p:
            add((p - 1, q + 1, d), -c * p)
        if q:
            add((p + 1, q - 1, d), c * q)
        add((p + 1, q + 1, d + 1), -4.0 * c)
    return {k: v for k, v in out.items() if v != 0.0}


def _evaluate_terms(terms: dict, j: int, alpha: float, beta: float, angle):
    angle = np.asarray(angle, dtype=float)
    x = np.cos(2.0 * angle)
    cos_a, sin_a = np.cos(angle), np.sin(angle)
    max_d = max(d for (_, _, d) in terms)
    jac = [_jacobi_derivative_values(j, alpha, beta, x, d) for d in range(max_d + 1)]
    total = np.zeros_like(angle)
    for (p, q, d), c in terms.items():
        total = total + c * cos_a ** p * sin_a ** q * jac[d]
    return total


def angular_factor_derivatives(model: Dunkl3DModel, spec: StateSpec3D, which: str, angle):
    """(f, f', f'') of the normalized azimuthal or polar factor, analytically.

    Derivatives are taken term-by-term on the cos^p sin^q P^(d)(cos 2 angle)
    representation with Jacobi derivatives from specfun; no finite differences.
    """
    if which == "azimuthal":
        j, alpha, beta = _azimuthal_indices(model, spec)
        a1, a2, _ = spec.a
        terms0 = {(a1, a2, 0): _azimuthal_norm(model, spec)}
    elif which == "polar":
        j, alpha, beta = _polar_indices(model, spec)
        a3 = spec.a[2]
        terms0 = {(a3, int(round(2.0 * spec.m)), 0): _polar_norm(model, spec)}
    else:
        raise ValueError(f"which must be 'azimuthal' or 'polar', got {which!r}")
    terms1 = _differentiate_terms(terms0)
    terms2 = _differentiate_terms(terms1)
    return (_evaluate_terms(terms0, j, alpha, beta, angle),
            _evaluate_terms(terms1, j, alpha, beta, angle),
            _evaluate_terms(terms2, j, alpha, beta, angle))
