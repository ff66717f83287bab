"""Continuous-time SAIQH model with a classical fixed-step RK4 integrator.

Serves as the smooth reference the discrete scheme is compared against.
RK4 does not guarantee positivity: negative round-off values within the
clamp window are zeroed, and a step that overshoots further is retried
with internally halved substeps (up to four halvings) before failing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, StepError, ValidationError
from .model_core import DerivedConstants, Parameters, State, derived_constants, force_of_infection
from .nsfd import Trajectory

__all__ = ["DerivativeVector", "rhs", "rk4_integrate"]

DEFAULT_H = 0.01
MAX_HALVINGS = 4


@dataclass(frozen=True)
class DerivativeVector:
    """Time derivatives of the six compartments and the death tally.

    The living components always satisfy
    dS+dA+dI+dQ+dH+dHbar = Lambda - mu*N - alpha1*f3*H - alpha2*kappa*Hbar.
    """

    dS: float
    dA: float
    dI: float
    dQ: float
    dH: float
    dHbar: float
    dD: float


def _rhs_raw(params: Parameters, dc: DerivedConstants,
             x: tuple[float, ...]) -> tuple[float, ...]:
    p = params
    s, a, i, q, h, hbar, _ = x
    n = s + a + i + q + h + hbar
    lam = p.beta * (p.lA * a + i + p.lH * h) / n
    return (
        p.Lambda + p.omega * p.m * q - (lam * (1 - p.p) + p.phi * p.p + p.mu) * s,
        lam * (1 - p.p) * s - dc.a0 * a,
        p.q * p.nu * a - dc.a1 * i,
        p.phi * p.p * s + p.delta1 * p.f1 * i + dc.a4 * h - dc.a2 * q,
        dc.a6 * i + dc.eta_k * hbar - dc.a3 * h,
        p.delta2 * p.f2 * h - dc.a7 * hbar,
        p.alpha1 * p.f3 * h + p.alpha2 * p.kappa * hbar,
    )


def rhs(params: Parameters, state: State) -> DerivativeVector:
    """Right-hand side of the continuous system, including dD."""
    if state.N <= 0:
        raise DomainError("derivatives undefined: total population is zero")
    dc = derived_constants(params)
    return DerivativeVector(*_rhs_raw(params, dc, state.living() + (state.D,)))


def _rk4_single(params: Parameters, dc: DerivedConstants,
                x: tuple[float, ...], h: float) -> tuple[float, ...]:
    k1 = _rhs_raw(params, dc, x)
    k2 = _rhs_raw(params, dc, tuple(v + h / 2 * k for v, k in zip(x, k1)))
    k3 = _rhs_raw(params, dc, tuple(v + h / 2 * k for v, k in zip(x, k2)))
    k4 = _rhs_raw(params, dc, tuple(v + h * k for v, k in zip(x, k3)))
    return tuple(v + h / 6 * (a + 2 * b + 2 * c + d)
                 for v, a, b, c, d in zip(x, k1, k2, k3, k4))


def _accept(x_old: tuple[float, ...], x_new: tuple[float, ...],
            tol_floor: float) -> tuple[float, ...] | None:
    """Clamp round-off negatives; None when the step must be retried finer."""
    out = []
    for value in x_new[:6]:
        if not math.isfinite(value):
            return None
        if value < 0:
            if value < tol_floor:
                return None
            value = 0.0
        out.append(value)
    d_new = x_new[6]
    if not math.isfinite(d_new) or d_new < x_old[6] + tol_floor:
        return None
    return tuple(out) + (max(d_new, x_old[6]),)


def _advance(params: Parameters, dc: DerivedConstants, x: tuple[float, ...],
             h: float, clamp_tol: float, depth: int) -> tuple[tuple[float, ...], int]:
    """One output step of size h, recursively halving on positivity trouble.

    Returns the new point and the deepest halving level used.
    """
    n_living = sum(x[:6])
    candidate = _accept(x, _rk4_single(params, dc, x, h), -clamp_tol * n_living)
    if candidate is not None:
        return candidate, depth
    if depth >= MAX_HALVINGS:
        raise StepError(0, f"RK4 produced a negative component beyond the clamp window "
                           f"even after {MAX_HALVINGS} step halvings (h reached {h!r})")
    first, d1 = _advance(params, dc, x, h / 2, clamp_tol, depth + 1)
    second, d2 = _advance(params, dc, first, h / 2, clamp_tol, depth + 1)
    return second, max(d1, d2)


def rk4_integrate(params: Parameters, init: State, h: float, n_steps: int,
                  t0_offset: int = 0, positivity_tolerance: float = 1e-12) -> Trajectory:
    """Classical 4th-order Runge-Kutta trajectory in the shared format.

    Records the same per-step diagnostics as the discrete scheme (the
    linear-solve residual slot is 0.0 for every step). rk4_halvings on the
    result reports the deepest internal halving any step needed; 0 means
    the whole run completed at the requested step size.
    """
    if not (isinstance(h, (int, float)) and math.isfinite(h) and h > 0):
        raise ValidationError(f"h must be a finite number > 0 (got {h!r})")
    if not (isinstance(n_steps, int) and n_steps >= 1):
        raise ValidationError(f"n_steps must be an integer >= 1 (got {n_steps!r})")
    dc = derived_constants(params)
    x = init.living() + (init.D,)
    states = [init]
    n_values = [init.N]
    lambdas = [force_of_infection(params, init)]
    residuals = [0.0]
    worst_depth = 0
    for n in range(n_steps):
        try:
            x, depth = _advance(params, dc, x, h, positivity_tolerance, 0)
        except StepError as err:
            raise StepError(n, err.message) from err
        worst_depth = max(worst_depth, depth)
        state = State(*x)
        states.append(state)
        n_values.append(state.N)
        lambdas.append(force_of_infection(params, state))
        residuals.append(0.0)
    return Trajectory(h=h, scheme="rk4", states=states, N=n_values, lambdas=lambdas,
                      residuals=residuals, t0_offset=t0_offset, rk4_halvings=worst_depth)
