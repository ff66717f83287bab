"""Discrete-time SAIQH epidemic model with a positivity-preserving scheme.

Six compartments (susceptible, asymptomatic, infected, quarantined,
hospitalized, intensive care) stepped by a Mickens-style nonstandard
finite-difference map that preserves positivity, boundedness and the
equilibria of the continuous system for every step size, alongside a
classical RK4 reference integrator, reproduction-number and equilibrium
analysis, Lyapunov descent verification, and file/CLI plumbing.
"""

from .errors import (DomainError, NoEndemicEquilibrium, PositivityError, SaiqhError,
                     StepError, ValidationError)
from .model_core import (DerivedConstants, EquilibriumPoint, Parameters, State,
                         critical_beta, derived_constants, dfe, endemic_equilibrium,
                         endemic_lambda, force_of_infection, reproduction_number,
                         reproduction_number_forms)
from .nsfd import StepConfig, Trajectory, fixed_point_residual, nsfd_step, psi, simulate
from .ode_reference import DerivativeVector, rhs, rk4_integrate
from .stability import StabilityReport, classify, lyapunov, verify_descent
from .data_io import (FitReport, ObservedSeries, Scenario, bundled_observed_path,
                      compare, default_scenario_path, load_observed, load_scenario,
                      read_trajectory, write_report, write_scenario, write_trajectory)

__version__ = "0.1.0"

__all__ = [
    "DomainError", "NoEndemicEquilibrium", "PositivityError", "SaiqhError",
    "StepError", "ValidationError",
    "DerivedConstants", "EquilibriumPoint", "Parameters", "State",
    "critical_beta", "derived_constants", "dfe", "endemic_equilibrium",
    "endemic_lambda", "force_of_infection", "reproduction_number",
    "reproduction_number_forms",
    "StepConfig", "Trajectory", "fixed_point_residual", "nsfd_step", "psi", "simulate",
    "DerivativeVector", "rhs", "rk4_integrate",
    "StabilityReport", "classify", "lyapunov", "verify_descent",
    "FitReport", "ObservedSeries", "Scenario", "bundled_observed_path", "compare",
    "default_scenario_path", "load_observed", "load_scenario", "read_trajectory",
    "write_report", "write_scenario", "write_trajectory",
    "__version__",
]
