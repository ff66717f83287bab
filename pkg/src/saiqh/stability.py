"""Discrete Lyapunov diagnostics and stability classification.

For a subcritical model (R0 < 1) the scalar
    L = (1/psi)*(S0*G(S/S0) + A + I + Q0*G(Q/Q0) + H + Hbar),
with G(x) = x - ln(x) - 1 and (S0, Q0) the disease-free coordinates, is
nonnegative, vanishes exactly at the disease-free point, and decreases
monotonically along trajectories of the step map. This module evaluates
L, verifies descent along a simulated trajectory, and classifies the
model against the R0 = 1 threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .model_core import Parameters, State, dfe, endemic_equilibrium, force_of_infection, \
    reproduction_number
from .nsfd import Trajectory, psi

__all__ = ["StabilityReport", "classify", "lyapunov", "verify_descent",
           "DESCENT_TOLERANCE", "THRESHOLD_BAND"]

# Relative slack absorbing round-off of the per-step 6x6 solve.
DESCENT_TOLERANCE = 1e-10
# |R0 - 1| band reported as sitting on the threshold.
THRESHOLD_BAND = 1e-12

DFE_GLOBALLY_STABLE = "dfe_globally_stable"
THRESHOLD = "threshold"
ENDEMIC_EXISTS = "endemic_exists"


@dataclass
class StabilityReport:
    """Outcome of a descent verification run.

    lyapunov_series holds one entry per trajectory index; None marks
    states where L is undefined (S or Q nonpositive). descent_violations
    counts adjacent defined pairs with an increase beyond
    DESCENT_TOLERANCE relative. distance_to_target is the per-step
    sup-norm distance (persons, over the six living compartments) to the
    disease-free point when R0 <= 1 and to the endemic point when R0 > 1.
    verified is set only for a subcritical model with zero violations, at
    least one defined L value, and matching recorded diagnostics.
    """

    r0: float
    classification: str
    lyapunov_series: list[float | None] = field(default_factory=list)
    descent_violations: int = 0
    distance_to_target: list[float] = field(default_factory=list)
    verified: bool = False
    diagnostics_mismatch: bool = False


def classify(params: Parameters) -> str:
    """Position of R0 against 1, with a THRESHOLD_BAND-wide middle band.

    Scaling Lambda (or the initial conditions) by a common positive factor
    does not move R0, so the classification is scale invariant.
    """
    r0 = reproduction_number(params)
    if abs(r0 - 1.0) <= THRESHOLD_BAND:
        return THRESHOLD
    return DFE_GLOBALLY_STABLE if r0 < 1.0 else ENDEMIC_EXISTS


def lyapunov(params: Parameters, state: State, h: float) -> float | None:
    """Lyapunov value at one state, or None where the logs are undefined.

    Requires S > 0 and Q > 0; returns None otherwise (an expected value,
    not an error: common initial conditions start with Q = 0). Whenever
    defined, L >= 0 with equality exactly at the disease-free point.
    """
    point = dfe(params).state
    if state.S <= 0.0 or state.Q <= 0.0:
        return None
    def g(x: float) -> float:
        return x - math.log(x) - 1.0
    total = (point.S * g(state.S / point.S) + state.A + state.I
             + point.Q * g(state.Q / point.Q) + state.H + state.Hbar)
    return total / psi(params, h)


def verify_descent(params: Parameters, traj: Trajectory) -> StabilityReport:
    """Check monotone descent of L along a trajectory of the step map.

    The leading undefined stretch (before both S and Q are positive) is
    skipped; descent is counted over consecutive defined values. The
    recorded per-step force of infection is recomputed from the states and
    any disagreement beyond 1e-9 relative flags a parameter/trajectory
    mismatch. Distances are measured to the disease-free point for
    R0 <= 1 and to the endemic point otherwise (for which attraction is
    reported descriptively, never asserted).
    """
    if len(traj.states) < 1:
        raise ValidationError("trajectory must contain at least one state")
    r0 = reproduction_number(params)
    classification = classify(params)
    target = (endemic_equilibrium(params).state if classification == ENDEMIC_EXISTS
              else dfe(params).state)

    mismatch = False
    if traj.lambdas:
        for state, recorded in zip(traj.states, traj.lambdas):
            expected = force_of_infection(params, state)
            if abs(expected - recorded) > 1e-9 * max(1.0, abs(expected), abs(recorded)):
                mismatch = True
                break

    point = dfe(params).state
    series: list[float | None] = []
    g = lambda x: x - math.log(x) - 1.0
    inv_psi = 1.0 / psi(params, traj.h)
    for state in traj.states:
        if state.S <= 0.0 or state.Q <= 0.0:
            series.append(None)
        else:
            series.append(inv_psi * (point.S * g(state.S / point.S) + state.A + state.I
                                     + point.Q * g(state.Q / point.Q) + state.H + state.Hbar))

    violations = 0
    previous: float | None = None
    for value in series:
        if value is None:
            previous = None
            continue
        if previous is not None and value - previous > DESCENT_TOLERANCE * max(1.0, abs(previous)):
            violations += 1
        previous = value

    distances = [max(abs(a - b) for a, b in zip(state.living(), target.living()))
                 for state in traj.states]
    has_defined = any(value is not None for value in series)
    verified = (classification == DFE_GLOBALLY_STABLE and violations == 0
                and has_defined and not mismatch)
    return StabilityReport(r0=r0, classification=classification, lyapunov_series=series,
                           descent_violations=violations, distance_to_target=distances,
                           verified=verified, diagnostics_mismatch=mismatch)
