"""Constrained l1 estimators for the unknown-covariance test.

Two estimators, both assembled as dense linear programs:

* a modified selector that jointly estimates the stabilized-model
  coefficients pi and the noise-to-response ratio rho, with a sup-norm
  correlation constraint scaled by rho and a lower-bound constraint keeping
  the estimated noise level away from zero;
* a scale-free selector for the auxiliary coefficients gamma linking the
  synthesized feature to the stabilized features, where n^{-1/2}||Z||_2
  bounds the unknown residual scale.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroResidualVector, ZeroSynthesizedFeature
from .lp import LE, LpProblem, solve_lp

_INF = float("inf")


@dataclass(frozen=True)
class Tuning:
    eta: float
    lam: float
    rho0: float

    def __post_init__(self):
        if self.eta <= 0 or self.lam <= 0:
            raise ValueError("eta and lam must be positive")
        if not 0.0 < self.rho0 < 1.0:
            raise ValueError("rho0 must lie in (0, 1)")


@dataclass
class DantzigFit:
    pi_hat: np.ndarray
    rho_hat: float
    gamma_hat: np.ndarray
    sigma_eps_hat: float
    sigma_u_hat: float
    pi_feasible: bool
    gamma_feasible: bool


def default_tuning(n, p):
    """Universal tuning: eta = lam = sqrt(2 log(p) / n), rho0 = 0.01."""
    if n < 2 or p < 2:
        raise ValueError("need n >= 2 and p >= 2")
    eta = math.sqrt(2.0 * math.log(p) / n)
    return Tuning(eta=eta, lam=eta, rho0=0.01)


def build_pi_lp(w_tilde, v, tuning):
    """Assemble the joint (pi, rho) selector as an LP.

    Variables are (c, pi, rho) with c the l1 epigraph block; objective 1'c;
    constraints -c <= pi <= c, rho in [rho0, 1],
    d1 rho + D1' pi <= d2 and -D2 rho <= D1 - D3 pi <= D2 rho, where
    d1 = rho0 ||v||^2 / 2, d2 = ||v||^2, D1 = W'v,
    D2 = sqrt(n) eta ||v||_2 1, D3 = W'W.
    """
    w_tilde = np.asarray(w_tilde, dtype=float)
    v = np.asarray(v, dtype=float).ravel()
    n, m = w_tilde.shape
    vnorm = float(np.linalg.norm(v))
    if vnorm == 0.0:
        raise ZeroResidualVector("residual vector V has zero norm")

    d1 = tuning.rho0 * vnorm**2 / 2.0
    d2 = vnorm**2
    big_d1 = w_tilde.T @ v
    big_d2 = math.sqrt(n) * tuning.eta * vnorm
    big_d3 = w_tilde.T @ w_tilde

    nv = 2 * m + 1  # (c, pi, rho)
    cons = []
    for j in range(m):
        row = np.zeros(nv)
        row[j] = -1.0
        row[m + j] = 1.0
        cons.append((row, LE, 0.0))  # pi_j - c_j <= 0
        row = np.zeros(nv)
        row[j] = -1.0
        row[m + j] = -1.0
        cons.append((row, LE, 0.0))  # -pi_j - c_j <= 0
    row = np.zeros(nv)
    row[m:2 * m] = big_d1
    row[2 * m] = d1
    cons.append((row, LE, d2))
    for j in range(m):
        row = np.zeros(nv)
        row[m:2 * m] = big_d3[j]
        row[2 * m] = -big_d2
        cons.append((row, LE, float(big_d1[j])))  # D3 pi - D2 rho <= D1
        row = np.zeros(nv)
        row[m:2 * m] = -big_d3[j]
        row[2 * m] = -big_d2
        cons.append((row, LE, float(-big_d1[j])))  # -D3 pi - D2 rho <= -D1

    objective = np.zeros(nv)
    objective[:m] = 1.0
    # c >= 0 is implied by -c <= pi <= c; stating it trims the solver's
    # standard-form expansion without changing the feasible (pi, rho) set.
    bounds = [(0.0, _INF)] * m + [(-_INF, _INF)] * m + [(tuning.rho0, 1.0)]
    return LpProblem(num_vars=nv, objective=objective, constraints=cons, var_bounds=bounds)


def fit_pi_rho(w_tilde, v, tuning):
    """Solve the joint selector. Returns (pi_hat, rho_hat, feasible)."""
    m = w_tilde.shape[1]
    sol = solve_lp(build_pi_lp(w_tilde, v, tuning))
    if sol.status != "optimal":
        return np.zeros(m), float("nan"), False
    return sol.x[m:2 * m].copy(), float(sol.x[2 * m]), True


def build_gamma_lp(w_tilde, z, tuning):
    """Assemble the scale-free selector for gamma as an LP.

    min 1'c subject to -c <= gamma <= c and
    |W'Z - W'W gamma| <= sqrt(n) lam ||Z||_2 componentwise.
    """
    w_tilde = np.asarray(w_tilde, dtype=float)
    z = np.asarray(z, dtype=float).ravel()
    n, m = w_tilde.shape
    znorm = float(np.linalg.norm(z))
    if znorm == 0.0:
        raise ZeroSynthesizedFeature("synthesized feature Z has zero norm")

    wz = w_tilde.T @ z
    ww = w_tilde.T @ w_tilde
    bound = math.sqrt(n) * tuning.lam * znorm

    nv = 2 * m  # (c, gamma)
    cons = []
    for j in range(m):
        row = np.zeros(nv)
        row[j] = -1.0
        row[m + j] = 1.0
        cons.append((row, LE, 0.0))
        row = np.zeros(nv)
        row[j] = -1.0
        row[m + j] = -1.0
        cons.append((row, LE, 0.0))
    for j in range(m):
        row = np.zeros(nv)
        row[m:] = ww[j]
        cons.append((row, LE, float(wz[j]) + bound))  # W'W g >= W'Z - b, <= W'Z + b
        row = np.zeros(nv)
        row[m:] = -ww[j]
        cons.append((row, LE, bound - float(wz[j])))

    objective = np.zeros(nv)
    objective[:m] = 1.0
    bounds = [(0.0, _INF)] * m + [(-_INF, _INF)] * m
    return LpProblem(num_vars=nv, objective=objective, constraints=cons, var_bounds=bounds)


def fit_gamma(w_tilde, z, tuning):
    """Solve the gamma selector. Returns (gamma_hat, feasible)."""
    m = w_tilde.shape[1]
    sol = solve_lp(build_gamma_lp(w_tilde, z, tuning))
    if sol.status != "optimal":
        return np.zeros(m), False
    return sol.x[m:].copy(), True


def fit_all(w_tilde, z, v, tuning):
    """Run both selectors and bundle residual scales into a DantzigFit."""
    n = w_tilde.shape[0]
    pi_hat, rho_hat, pi_ok = fit_pi_rho(w_tilde, v, tuning)
    gamma_hat, gamma_ok = fit_gamma(w_tilde, z, tuning)
    eps_res = v - w_tilde @ pi_hat
    u_res = z - w_tilde @ gamma_hat
    return DantzigFit(
        pi_hat=pi_hat,
        rho_hat=rho_hat,
        gamma_hat=gamma_hat,
        sigma_eps_hat=float(np.linalg.norm(eps_res)) / math.sqrt(n),
        sigma_u_hat=float(np.linalg.norm(u_res)) / math.sqrt(n),
        pi_feasible=pi_ok,
        gamma_feasible=gamma_ok,
    )
