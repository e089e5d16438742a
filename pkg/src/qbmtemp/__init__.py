"""Microcanonical temperature of a quantum Brownian oscillator in a Drude bath.

Units are internal (hbar = K = m = omega0 = 1 by default); energies quoted
as E / (hbar omega0 / 2pi) convert with :func:`energy_from_paper`.
"""
from .cubic import CubicRoots, solve_drude_cubic
from .errors import (
    DomainError,
    EmptyInput,
    InvalidParams,
    MaxIterations,
    NoBracket,
    NumericalFailure,
    PoleError,
    QBMError,
    SolverError,
    SpaInvalid,
)
from .oracle import DiscreteBath, NormalModes, discretize_bath, exact_dos_power_law, finite_n_beta, normal_modes
from .qbm import ModelParams, energy_from_paper, energy_to_paper, saddle_function
from .spa import CompositeSystem, LogZTerm, SaddleSolution, select_max_entropy, solve_saddle, spa_dos
from .specfun import coth_stable, digamma, log_gamma, zeta4
from .thermo import (
    ThermoPoint,
    beta_of_E,
    entropy_global,
    entropy_subsystem,
    first_order_beta,
    q_squared,
    sweep,
    thermo_point,
)

__version__ = "0.1.0"
