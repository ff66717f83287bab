"""Independent oracle implementations used to cross-check the package.

Everything here is deliberately written against the raw parameter fields
(not the package's derived-constant helpers) and with different
algorithms than the code under test: a Gauss-Seidel sweep instead of the
closed-form solve, and a power iteration on the next-generation matrix
instead of the closed-form reproduction number.
"""

from __future__ import annotations

import numpy as np

from saiqh import Parameters, State


def gauss_seidel_update(params: Parameters, state: State, h: float,
                        max_iters: int = 500_000) -> tuple[float, ...]:
    """One scheme step obtained by sweeping the six assignment equations.

    Each equation is iterated in place with the latest values until the
    sweep reaches floating-point stationarity, which is the fixed point of
    the update system. Returns the six living compartments.
    """
    p = params
    ps = np.expm1(p.mu * h) / p.mu
    s0, a0_, i0, q0, h0, hb0 = state.living()
    n = state.N
    lam = p.beta * (p.lA * a0_ + i0 + p.lH * h0) / n
    a_exit = p.q * p.nu + p.mu
    i_exit = p.delta1 + p.mu
    q_exit = p.omega * p.m + p.mu
    h_exit = p.delta2 * (1 - p.f2 - p.f3) + p.delta2 * p.f2 + p.alpha1 * p.f3 + p.mu
    hb_exit = p.alpha2 * p.kappa + p.eta * (1 - p.kappa) + p.mu
    s, a, i, q, hh, hb = s0, a0_, i0, q0, h0, hb0
    for _ in range(max_iters):
        s_prev, q_prev, hb_prev = s, q, hb
        s = (p.Lambda * ps + p.omega * p.m * ps * q + s0) / (1 + (lam * (1 - p.p) + p.phi * p.p + p.mu) * ps)
        a = (a0_ + lam * (1 - p.p) * ps * s) / (1 + a_exit * ps)
        i = (i0 + p.q * p.nu * ps * a) / (1 + i_exit * ps)
        q = (q0 + ps * (p.phi * p.p * s + p.delta1 * p.f1 * i
                        + p.delta2 * (1 - p.f2 - p.f3) * hh)) / (1 + q_exit * ps)
        hh = (h0 + ps * (p.delta1 * (1 - p.f1) * i + p.eta * (1 - p.kappa) * hb)) / (1 + h_exit * ps)
        hb = (hb0 + p.delta2 * p.f2 * ps * hh) / (1 + hb_exit * ps)
        if s == s_prev and q == q_prev and hb == hb_prev:
            return s, a, i, q, hh, hb
    raise AssertionError("Gauss-Seidel sweep did not reach stationarity")


def gauss_seidel_update_batch(param_arrays: dict[str, np.ndarray], x0: np.ndarray,
                              h: np.ndarray, max_iters: int = 500_000) -> np.ndarray:
    """Vectorized Gauss-Seidel sweep over many (params, state, h) triples.

    param_arrays maps each Parameters field name to a 1-d array; x0 has
    shape (n, 6). Iterates every problem until all are stationary.
    """
    g = lambda name: param_arrays[name]
    ps = np.expm1(g("mu") * h) / g("mu")
    s0, a0_, i0, q0, h0, hb0 = (x0[:, j].copy() for j in range(6))
    n = x0.sum(axis=1)
    lam = g("beta") * (g("lA") * a0_ + i0 + g("lH") * h0) / n
    a_exit = g("q") * g("nu") + g("mu")
    i_exit = g("delta1") + g("mu")
    q_exit = g("omega") * g("m") + g("mu")
    recover = g("delta2") * (1 - g("f2") - g("f3"))
    h_exit = recover + g("delta2") * g("f2") + g("alpha1") * g("f3") + g("mu")
    eta_k = g("eta") * (1 - g("kappa"))
    hb_exit = g("alpha2") * g("kappa") + eta_k + g("mu")
    s, a, i, q, hh, hb = (v.copy() for v in (s0, a0_, i0, q0, h0, hb0))
    for _ in range(max_iters):
        s_prev, q_prev, hb_prev = s, q, hb
        s = (g("Lambda") * ps + g("omega") * g("m") * ps * q + s0) / \
            (1 + (lam * (1 - g("p")) + g("phi") * g("p") + g("mu")) * ps)
        a = (a0_ + lam * (1 - g("p")) * ps * s) / (1 + a_exit * ps)
        i = (i0 + g("q") * g("nu") * ps * a) / (1 + i_exit * ps)
        q = (q0 + ps * (g("phi") * g("p") * s + g("delta1") * g("f1") * i + recover * hh)) / \
            (1 + q_exit * ps)
        hh = (h0 + ps * (g("delta1") * (1 - g("f1")) * i + eta_k * hb)) / (1 + h_exit * ps)
        hb = (hb0 + g("delta2") * g("f2") * ps * hh) / (1 + hb_exit * ps)
        if (np.array_equal(s, s_prev) and np.array_equal(q, q_prev)
                and np.array_equal(hb, hb_prev)):
            return np.stack([s, a, i, q, hh, hb], axis=1)
    raise AssertionError("vectorized Gauss-Seidel sweep did not reach stationarity")


def ngm_spectral_radius(params: Parameters, tol: float = 1e-14,
                        max_iters: int = 1000) -> float:
    """Spectral radius of the next-generation matrix by power iteration.

    The infected subsystem (A, I, H, Hbar) is linearized at the
    disease-free point: F holds the new-infection inflow (the force of
    infection differentiated at the disease-free susceptible share) and V
    the transitions. The matrix is F V^-1.
    """
    p = params
    s_share = (p.m * p.omega + p.mu) / (p.p * p.phi + p.m * p.omega + p.mu)
    f = np.zeros((4, 4))
    f[0, :] = p.beta * (1 - p.p) * s_share * np.array([p.lA, 1.0, p.lH, 0.0])
    v = np.array([
        [p.q * p.nu + p.mu, 0.0, 0.0, 0.0],
        [-p.q * p.nu, p.delta1 + p.mu, 0.0, 0.0],
        [0.0, -p.delta1 * (1 - p.f1),
         p.delta2 * (1 - p.f2 - p.f3) + p.delta2 * p.f2 + p.alpha1 * p.f3 + p.mu,
         -p.eta * (1 - p.kappa)],
        [0.0, 0.0, -p.delta2 * p.f2, p.alpha2 * p.kappa + p.eta * (1 - p.kappa) + p.mu],
    ])
    k = f @ np.linalg.inv(v)
    vec = np.full(4, 0.5)
    rho = 0.0
    for _ in range(max_iters):
        w = k @ vec
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        vec = w / norm
        rho_next = float(vec @ (k @ vec))
        if abs(rho_next - rho) <= tol * max(1.0, abs(rho_next)):
            return rho_next
        rho = rho_next
    return rho


def draw_params(rng: np.random.Generator, subcritical: bool = False,
                mu_range: tuple[float, float] = (1e-5, 5e-2),
                rate_range: tuple[float, float] = (1e-2, 1.0)) -> Parameters:
    """Random valid parameter set with lA = 1 (the closed forms' reference).

    With subcritical=True, beta is rescaled below the critical value so
    that R0 < 1.
    """
    log_uniform = lambda lo, hi: float(10 ** rng.uniform(np.log10(lo), np.log10(hi)))
    f2 = float(rng.uniform(0.0, 0.9))
    params = Parameters(
        Lambda=log_uniform(1.0, 1e3),
        mu=log_uniform(*mu_range),
        beta=log_uniform(0.05, 5.0),
        lA=1.0,
        lH=float(rng.uniform(0.0, 1.0)),
        phi=log_uniform(*rate_range),
        nu=log_uniform(*rate_range),
        delta1=log_uniform(*rate_range),
        delta2=log_uniform(*rate_range),
        eta=log_uniform(*rate_range),
        omega=log_uniform(*rate_range),
        alpha1=log_uniform(*rate_range),
        alpha2=log_uniform(*rate_range),
        p=float(rng.uniform(0.01, 0.99)),
        q=float(rng.uniform(0.01, 0.99)),
        f1=float(rng.uniform(0.01, 0.99)),
        f2=f2,
        f3=float(rng.uniform(0.0, 1.0)) * (1.0 - f2),
        kappa=float(rng.uniform(0.01, 0.99)),
        m=float(rng.uniform(0.01, 0.99)),
    )
    if subcritical:
        from saiqh import critical_beta
        params = params.with_overrides(
            beta=critical_beta(params) * float(rng.uniform(0.05, 0.95)))
    return params


def draw_state(rng: np.random.Generator, params: Parameters,
               fill: tuple[float, float] = (0.01, 1.0)) -> State:
    """Random nonnegative state with N at a random fraction of Lambda/mu."""
    weights = rng.uniform(0.0, 1.0, 6)
    weights = weights / weights.sum() * float(rng.uniform(*fill))
    cap = params.Lambda / params.mu
    values = weights * cap
    return State(*[float(v) for v in values])
