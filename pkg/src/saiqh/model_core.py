"""Core types and closed-form analysis of the SAIQH epidemic model.

The model tracks six living compartments: susceptible (S), asymptomatic
or mildly symptomatic infected (A), symptomatic infected (I), quarantined
at home (Q), hospitalized (H) and hospitalized in intensive care (Hbar).
A cumulative death tally D is carried alongside but is not part of the
six-dimensional dynamical state.

This module holds the parameter and state types, the composite rate
constants used throughout, the force of infection, the basic reproduction
number R0 in its equivalent closed forms, and the disease-free and
endemic equilibrium points. Everything here is a pure function of
immutable values and is safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError, NoEndemicEquilibrium, ValidationError

__all__ = [
    "Parameters",
    "State",
    "DerivedConstants",
    "EquilibriumPoint",
    "derived_constants",
    "force_of_infection",
    "reproduction_number",
    "reproduction_number_forms",
    "critical_beta",
    "dfe",
    "endemic_lambda",
    "endemic_equilibrium",
]

# Rates that must be strictly positive. beta and phi are listed separately:
# both have meaningful zero limits (no transmission, no quarantine inflow).
_POSITIVE_RATES = ("Lambda", "mu", "nu", "delta1", "delta2", "eta", "omega",
                   "alpha1", "alpha2")
_NONNEGATIVE = ("beta", "phi", "lA", "lH")
_FRACTIONS = ("p", "q", "f1", "f2", "f3", "kappa", "m")


@dataclass(frozen=True)
class Parameters:
    """Model rates (per day) and dimensionless fractions.

    Lambda   recruitment into S (persons/day)
    mu       natural death rate, applies to every compartment
    beta     human-to-human transmission rate
    lA, lH   relative transmissibility of the A and H classes
    phi      S -> Q quarantine rate
    nu       A -> I progression rate
    delta1   I exit rate (to Q or H)
    delta2   H exit rate (to Q or Hbar)
    eta      Hbar -> H recovery rate
    omega    Q -> S return rate
    alpha1   disease death rate of the H class
    alpha2   disease death rate of the Hbar class
    p        fraction of susceptibles subject to quarantine
    q        fraction of A cases that develop severe symptoms
    f1       fraction of I cases treated at home
    f2       fraction of H cases moved to intensive care
    f3       fraction of H cases that die
    kappa    fraction of Hbar cases that die
    m        fraction of quarantined individuals that return to S

    mu must be strictly positive: the exponential denominator function of
    the discrete scheme, (exp(mu*h) - 1)/mu, is undefined at mu = 0.
    """

    Lambda: float
    mu: float
    beta: float
    lA: float
    lH: float
    phi: float
    nu: float
    delta1: float
    delta2: float
    eta: float
    omega: float
    alpha1: float
    alpha2: float
    p: float
    q: float
    f1: float
    f2: float
    f3: float
    kappa: float
    m: float

    def __post_init__(self) -> None:
        for name in _POSITIVE_RATES + _NONNEGATIVE + _FRACTIONS:
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValidationError(f"{name} must be a finite number (got {value!r})")
        for name in _POSITIVE_RATES:
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be > 0 (got {getattr(self, name)!r})")
        for name in _NONNEGATIVE:
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0 (got {getattr(self, name)!r})")
        for name in _FRACTIONS:
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1] (got {value!r})")
        if self.f2 + self.f3 > 1.0:
            raise ValidationError(
                f"f2 + f3 must not exceed 1 (got {self.f2} + {self.f3} = {self.f2 + self.f3})")

    def with_overrides(self, **changes: float) -> "Parameters":
        """Copy with the given fields replaced; the copy is re-validated."""
        return replace(self, **changes)


@dataclass(frozen=True)
class State:
    """One point of the model: six living compartments plus cumulative deaths.

    All compartments are nonnegative person counts. D is monotone along a
    trajectory and carries no dynamics of its own.
    """

    S: float
    A: float
    I: float
    Q: float
    H: float
    Hbar: float
    D: float = 0.0

    def __post_init__(self) -> None:
        for name in ("S", "A", "I", "Q", "H", "Hbar", "D"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValidationError(f"{name} must be a finite number (got {value!r})")
            if value < 0:
                raise ValidationError(f"{name} must be >= 0 (got {value!r})")

    @property
    def N(self) -> float:
        """Total living population S + A + I + Q + H + Hbar."""
        return self.S + self.A + self.I + self.Q + self.H + self.Hbar

    def living(self) -> tuple[float, float, float, float, float, float]:
        return (self.S, self.A, self.I, self.Q, self.H, self.Hbar)


@dataclass(frozen=True)
class DerivedConstants:
    """Composite rates that recur in every closed-form expression.

    a0 = q*nu + mu                      exit rate of A
    a1 = delta1 + mu                    exit rate of I
    a2 = m*omega + mu                   exit rate of Q
    a3 = delta2*(1-f2-f3) + delta2*f2 + alpha1*f3 + mu   exit rate of H
    a4 = delta2*(1-f2-f3)               H -> Q recovery rate
    a5 = p*phi + mu                     exit rate of S at the disease-free point
    a6 = delta1*(1-f1)                  I -> H hospitalization rate
    a7 = alpha2*kappa + eta_k + mu      exit rate of Hbar
    eta_k = eta*(1-kappa)               Hbar -> H recovery rate
    chi = a3*a7 - delta2*eta_k*f2       H/Hbar coupling determinant, > 0

    calN and calD are the numerator and denominator of the reproduction
    number: calN = beta*a2*(1-p)*(lH*a6*a7*q*nu + (a1+q*nu)*chi) and
    calD = a0*a1*chi*(p*phi + a2).
    """

    a0: float
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    a6: float
    a7: float
    eta_k: float
    chi: float
    calN: float
    calD: float


def derived_constants(params: Parameters) -> DerivedConstants:
    """Compute all composite rates for a validated parameter set."""
    p = params
    a0 = p.q * p.nu + p.mu
    a1 = p.delta1 + p.mu
    a2 = p.m * p.omega + p.mu
    a3 = p.delta2 * (1 - p.f2 - p.f3) + p.delta2 * p.f2 + p.alpha1 * p.f3 + p.mu
    a4 = p.delta2 * (1 - p.f2 - p.f3)
    a5 = p.p * p.phi + p.mu
    a6 = p.delta1 * (1 - p.f1)
    eta_k = p.eta * (1 - p.kappa)
    a7 = p.alpha2 * p.kappa + eta_k + p.mu
    chi = a3 * a7 - p.delta2 * eta_k * p.f2
    calN = p.beta * a2 * (1 - p.p) * (p.lH * a6 * a7 * p.q * p.nu + (a1 + p.q * p.nu) * chi)
    calD = a0 * a1 * chi * (p.p * p.phi + a2)
    return DerivedConstants(a0, a1, a2, a3, a4, a5, a6, a7, eta_k, chi, calN, calD)


def force_of_infection(params: Parameters, state: State) -> float:
    """Per-susceptible infection rate beta*(lA*A + I + lH*H)/N.

    The intensive-care class is deliberately excluded: transmission from
    that setting is negligible. Raises DomainError when the living
    population is zero.
    """
    n = state.N
    if n <= 0:
        raise DomainError("force of infection undefined: total population is zero")
    return params.beta * (params.lA * state.A + state.I + params.lH * state.H) / n


def reproduction_number(params: Parameters) -> float:
    """Basic reproduction number R0 = calN/calD.

    The closed form takes the asymptomatic class as the transmissibility
    reference (lA = 1); lA does not appear in it. It equals the spectral
    radius of the next-generation matrix of the infected subsystem
    (A, I, H, Hbar) linearized at the disease-free point.
    """
    dc = derived_constants(params)
    return dc.calN / dc.calD


def reproduction_number_forms(params: Parameters) -> tuple[float, float]:
    """The two equivalent groupings of R0, for cross-checking.

    The first expands chi against the H/Hbar block:
        beta*a2*(1-p)*[(lH*a6*q*nu + (a1+q*nu)*a3)*a7 - delta2*eta_k*f2*(q*nu+a1)] / calD
    The second substitutes a1 + q*nu = a0 + delta1:
        beta*a2*(1-p)*[lH*a6*a7*q*nu + (a0+delta1)*chi] / calD
    Both must agree with reproduction_number to floating round-off.
    """
    p = params
    dc = derived_constants(params)
    qnu = p.q * p.nu
    grouped = (p.beta * dc.a2 * (1 - p.p)
               * ((p.lH * dc.a6 * qnu + (dc.a1 + qnu) * dc.a3) * dc.a7
                  - p.delta2 * dc.eta_k * p.f2 * (qnu + dc.a1))) / dc.calD
    rewritten = (p.beta * dc.a2 * (1 - p.p)
                 * (p.lH * dc.a6 * dc.a7 * qnu + (dc.a0 + p.delta1) * dc.chi)) / dc.calD
    return grouped, rewritten


def critical_beta(params: Parameters) -> float:
    """Transmission rate at which R0 crosses 1 (R0 is linear in beta).

    Raises DomainError when p = 1: no transmission is possible and no
    finite beta reaches the threshold.
    """
    r0_at_unit_beta = reproduction_number(params.with_overrides(beta=1.0))
    if r0_at_unit_beta == 0.0:
        raise DomainError("critical beta undefined: p = 1 blocks all transmission")
    return 1.0 / r0_at_unit_beta


@dataclass(frozen=True)
class EquilibriumPoint:
    """A fixed point of the flow and of the discrete step map.

    kind is "DFE" (disease-free) or "EE" (endemic); lambda_star is the
    force of infection at the point (zero for the DFE). The death tally D
    is 0 by convention: D is cumulative and has no equilibrium value.
    """

    kind: str
    state: State
    lambda_star: float


def dfe(params: Parameters) -> EquilibriumPoint:
    """Disease-free equilibrium.

    S0 = Lambda*a2 / (mu*(p*phi + a2)), Q0 = Lambda*p*phi / (mu*(p*phi + a2)),
    all infected compartments zero. S0 + Q0 = Lambda/mu.
    """
    p = params
    dc = derived_constants(params)
    denom = p.mu * (p.p * p.phi + dc.a2)
    s0 = p.Lambda * dc.a2 / denom
    q0 = p.Lambda * p.p * p.phi / denom
    return EquilibriumPoint("DFE", State(S=s0, A=0.0, I=0.0, Q=q0, H=0.0, Hbar=0.0), 0.0)


def _infection_pressure_terms(params: Parameters, dc: DerivedConstants) -> tuple[float, float]:
    """Helper for the endemic force of infection.

    Returns (nhat, C) with nhat = calN/beta evaluated without dividing by
    beta, and C = q*nu*(a2*a6*(a7*(1-lH) + delta2*f2) + chi*f1*delta1 + a4*a6*a7).
    """
    p = params
    qnu = p.q * p.nu
    nhat = dc.a2 * (1 - p.p) * (p.lH * dc.a6 * dc.a7 * qnu + (dc.a1 + qnu) * dc.chi)
    c = qnu * (dc.a2 * dc.a6 * (dc.a7 * (1 - p.lH) + p.delta2 * p.f2)
               + dc.chi * p.f1 * p.delta1 + dc.a4 * dc.a6 * dc.a7)
    return nhat, c


def endemic_lambda(params: Parameters) -> float:
    """Force of infection at the endemic equilibrium.

    lambda* = (calN - calD) / (calN/beta + (1-p)*C) with
    C = q*nu*(a2*a6*(a7*(1-lH) + delta2*f2) + chi*f1*delta1 + a4*a6*a7).
    This is the unique value for which the equilibrium coordinates
    reproduce their own force of infection, so the resulting point is an
    exact fixed point of the step map; it is positive iff R0 > 1 and
    vanishes at R0 = 1. The sign is meaningful either way, so a negative
    value (subcritical model) is returned rather than raised.

    Raises DomainError when p = 1 (the denominator vanishes identically).
    """
    if params.p >= 1.0:
        raise DomainError("endemic force of infection undefined: p = 1 makes the "
                          "denominator vanish (division by zero)")
    dc = derived_constants(params)
    nhat, c = _infection_pressure_terms(params, dc)
    return (dc.calN - dc.calD) / (nhat + (1 - params.p) * c)


def endemic_equilibrium(params: Parameters) -> EquilibriumPoint:
    """Endemic equilibrium, defined only for R0 > 1.

    With T = lambda*(1-p) and the shared denominator
    D_A = mu*calD + T*(chi*(a2*a1*a0 - f1*delta1*omega*m*q*nu) - a4*a6*a7*q*nu*omega*m),
    the coordinates are
        S*    = a0*a1*a2*Lambda*chi / D_A
        A*    = a1*a2*Lambda*chi*T / D_A
        I*    = a2*q*nu*Lambda*chi*T / D_A
        Q*    = Lambda*(a0*a1*p*phi*chi + T*q*nu*(chi*f1*delta1 + a4*a6*a7)) / D_A
        H*    = a2*a6*a7*q*nu*Lambda*T / D_A
        Hbar* = a2*a6*delta2*f2*q*nu*Lambda*T / D_A
    Every coordinate is strictly positive and the point is a fixed point
    of the step map for every step size.
    """
    r0 = reproduction_number(params)
    if not r0 > 1.0:
        raise NoEndemicEquilibrium(r0)
    p = params
    dc = derived_constants(params)
    lam = endemic_lambda(params)
    t = lam * (1 - p.p)
    qnu = p.q * p.nu
    d_a = (p.mu * dc.calD
           + t * (dc.chi * (dc.a2 * dc.a1 * dc.a0 - p.f1 * p.delta1 * p.omega * p.m * qnu)
                  - dc.a4 * dc.a6 * dc.a7 * qnu * p.omega * p.m))
    lam_chi = p.Lambda * dc.chi
    s = dc.a0 * dc.a1 * dc.a2 * lam_chi / d_a
    a = dc.a1 * dc.a2 * lam_chi * t / d_a
    i = dc.a2 * qnu * lam_chi * t / d_a
    qq = p.Lambda * (dc.a0 * dc.a1 * p.p * p.phi * dc.chi
                     + t * qnu * (dc.chi * p.f1 * p.delta1 + dc.a4 * dc.a6 * dc.a7)) / d_a
    h = dc.a2 * dc.a6 * dc.a7 * qnu * p.Lambda * t / d_a
    hbar = dc.a2 * dc.a6 * p.delta2 * p.f2 * qnu * p.Lambda * t / d_a
    state = State(S=s, A=a, I=i, Q=qq, H=h, Hbar=hbar)
    for name, value in (("S", s), ("A", a), ("I", i), ("Q", qq), ("H", h), ("Hbar", hbar)):
        if not value > 0:
            raise DomainError(f"endemic equilibrium coordinate {name} is not positive "
                              f"({value!r}); parameters sit outside the supported regime")
    return EquilibriumPoint("EE", state, lam)
