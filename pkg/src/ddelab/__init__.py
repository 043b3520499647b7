"""Numerical laboratory for solitary waves of the double dispersion equation.

Construct exact sech-power traveling waves, evaluate their variational
functionals and velocity thresholds, map orbital-stability regions through
the convexity cubic, and test the stable/blow-up dichotomy dynamically with
a pseudospectral solver.
"""

from .errors import (
    DegenerateVelocityError,
    InconsistentRootCountError,
    NonFiniteError,
    NotApplicableError,
    StepRejectedError,
    TailTooFatError,
)
from .grid import Grid, StatePair
from .params import ModelParams, WaveContext
from .sim import (
    PerturbedData,
    SimConfig,
    SimRecord,
    integrate,
    levine_functional,
    orbital_distance,
    perturbed_initial_data,
    rhs,
    stable_dt,
    step_rk4,
)
from .stability import (
    GCoefficients,
    RegionReport,
    alpha_and_C,
    classify_region,
    critical_mu,
    critical_velocity_squared,
    critical_velocity_squared_raw,
    d_second_derivative_fd,
    g_coefficients,
    g_eval,
    quartic_k,
    roots_in_unit_interval,
    sigma_residual,
)
from .wave_core import (
    FunctionalReport,
    ProfileField,
    d_of_c,
    default_grid,
    energy_momentum,
    functionals,
    profile_on_grid,
    solitary_profile,
    suggest_length,
    traveling_pair,
)

__version__ = "0.1.0"
