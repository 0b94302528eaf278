"""Exact states of the Dunkl harmonic oscillator with time-dependent mass
and frequency, built on an explicitly integrated auxiliary (Ermakov-Pinney)
trajectory, together with grid-based numerical checks that are independent
of the closed forms they test.
"""
from .dynamics import (
    InvariantCoefficients,
    PinneySingularityError,
    PinneyStiffnessError,
    PinneyTrajectory,
    Scenario,
    TimeProfile,
    TrajectoryPoint,
    equilibrium_rho,
    evaluate_profile,
    invariant_coefficients,
    phase_base,
    solve_ermakov_pinney,
)
from .dunkl1d import (
    Dunkl1DModel,
    StateSpec1D,
    WavefunctionSample,
    dunkl_weight_1d,
    eigenfunction_1d,
    eigenvalue_1d,
    normalization_constant_1d,
    nu,
    phase_1d,
    wavefunction_1d,
)
from .dunkl3d import (
    Dunkl3DModel,
    SeparationConstants,
    StateSpec3D,
    admissible_l_values,
    admissible_m_values,
    angular_factor_derivatives,
    angular_weight,
    azimuthal_eigenfunction,
    eigenvalue_3d,
    phase_3d,
    polar_eigenfunction,
    radial_eigenfunction,
    radial_weight,
    separation_constants,
    wavefunction_3d,
)
from .oracle import (
    DiscreteField,
    ResidualReport,
    SpatialGrid1D,
    angular_residual,
    apply_invariant_1d,
    apply_parity_hamiltonian,
    auto_grid,
    commutator_check,
    crank_nicolson_propagate,
    fidelity,
    gaussian_bump,
    gram_orthonormality,
    invariant_eigen_residual_1d,
    invariant_expectation_drift,
    sample_gauged_state,
    schrodinger_residual_1d,
    weighted_inner_product,
)
from .specfun import (
    PolynomialEval,
    hermite,
    jacobi,
    laguerre,
    log_gamma,
)

__version__ = "0.1.0"
