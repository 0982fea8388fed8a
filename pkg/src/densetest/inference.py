"""Test statistics, p-values, interval inversion, and loading helpers.

The known-covariance statistic studentizes the sample moment of
l_i = z_i (y_i - z_i g0).  The unknown-covariance statistic self-normalizes
the inner product of the two selector residuals; its normalizer is an
intentionally inconsistent scale estimate, yet the statistic is
asymptotically standard normal under the null.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dantzig import DantzigFit, default_tuning, fit_all, fit_gamma, fit_pi_rho
from .errors import (
    DegenerateResidual,
    DegenerateStatistic,
    EmptyAcceptanceRegion,
    IndexOutOfRange,
    InfeasibleEstimator,
    ZeroLoading,
)
from .numerics import normal_cdf, normal_quantile
from .synthesize import Hypothesis, decompose_known, decompose_unknown

KNOWN_SIGMA = "known_sigma"
UNKNOWN_SIGMA = "unknown_sigma"


@dataclass
class TestReport:
    method: str
    statistic: float
    p_value: float
    reject: bool
    alpha: float
    diagnostics: DantzigFit = None

    def to_dict(self):
        out = {
            "method": self.method,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "reject": self.reject,
            "alpha": self.alpha,
        }
        if self.diagnostics is not None:
            out["diagnostics"] = {
                "rho_hat": self.diagnostics.rho_hat,
                "sigma_eps_hat": self.diagnostics.sigma_eps_hat,
                "sigma_u_hat": self.diagnostics.sigma_u_hat,
                "pi_l1": float(np.sum(np.abs(self.diagnostics.pi_hat))),
                "gamma_l1": float(np.sum(np.abs(self.diagnostics.gamma_hat))),
                "pi_feasible": self.diagnostics.pi_feasible,
                "gamma_feasible": self.diagnostics.gamma_feasible,
            }
        return out


@dataclass
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    grid_resolution: float
    contiguous: bool = True
    n_undetermined: int = 0

    def to_dict(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "grid_resolution": self.grid_resolution,
            "contiguous": self.contiguous,
            "n_undetermined": self.n_undetermined,
        }


def _report(method, stat, alpha, diagnostics=None):
    p_value = 2.0 * (1.0 - normal_cdf(abs(stat)))
    reject = abs(stat) > normal_quantile(1.0 - alpha / 2.0)
    return TestReport(method=method, statistic=float(stat), p_value=float(p_value),
                      reject=bool(reject), alpha=float(alpha), diagnostics=diagnostics)


def test_known_sigma(x, y, sigma, hyp, alpha=0.05):
    """Studentized moment test with known feature covariance."""
    feats = decompose_known(x, hyp.a, sigma)
    return _known_sigma_report(feats.z, np.asarray(y, dtype=float).ravel(), hyp.g0, alpha)


def _known_sigma_report(z, y, g0, alpha):
    l = z * (y - z * g0)
    denom = float(np.dot(l, l))
    if denom == 0.0:
        raise DegenerateStatistic("all statistic summands are zero")
    stat = float(np.sum(l)) / math.sqrt(denom)
    return _report(KNOWN_SIGMA, stat, alpha)


def test_unknown_sigma(x, y, hyp, alpha=0.05, tuning=None):
    """Self-normalized moment test without covariance knowledge."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    n, p = x.shape
    if tuning is None:
        tuning = default_tuning(n, p)
    feats = decompose_unknown(x, hyp.a)
    v = y - feats.z * hyp.g0
    fit = fit_all(feats.w_tilde, feats.z, v, tuning)
    if not (fit.pi_feasible and fit.gamma_feasible):
        raise InfeasibleEstimator(
            f"selector LP infeasible (pi={fit.pi_feasible}, gamma={fit.gamma_feasible})")
    return _statistic_from_fit(feats, v, fit, n, alpha)


def _statistic_from_fit(feats, v, fit, n, alpha):
    u_res = feats.z - feats.w_tilde @ fit.gamma_hat
    e_res = v - feats.w_tilde @ fit.pi_hat
    nu = float(np.linalg.norm(u_res))
    ne = float(np.linalg.norm(e_res))
    if nu < 1e-12 or ne < 1e-12:
        raise DegenerateResidual("a residual norm is numerically zero")
    stat = math.sqrt(n) * float(np.dot(u_res, e_res)) / (nu * ne)
    return _report(UNKNOWN_SIGMA, stat, alpha, diagnostics=fit)


def power_envelope(alpha, d):
    """Asymptotic local power Phi(-q + d) + Phi(-q - d), q the two-sided quantile."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    q = normal_quantile(1.0 - alpha / 2.0)
    return float(normal_cdf(-q + d) + normal_cdf(-q - d))


def pairwise_loading(k, j, p):
    """Loading for testing equality of coefficients k and j (1-based)."""
    if not (1 <= k <= p) or not (1 <= j <= p):
        raise IndexOutOfRange(f"indices ({k}, {j}) outside 1..{p}")
    if k == j:
        raise IndexOutOfRange("pairwise indices must differ")
    a = np.zeros(p)
    a[k - 1] = 1.0
    a[j - 1] = -1.0
    return a


def group_loading(c, group, p):
    """Loading with weights c placed at the (1-based) group indices."""
    c = np.asarray(c, dtype=float).ravel()
    group = list(group)
    if len(group) != c.size or len(group) < 1:
        raise IndexOutOfRange("group and weights must have equal positive length")
    if len(set(group)) != len(group):
        raise IndexOutOfRange("duplicate group indices")
    a = np.zeros(p)
    for weight, idx in zip(c, group):
        if not 1 <= idx <= p:
            raise IndexOutOfRange(f"index {idx} outside 1..{p}")
        a[idx - 1] = weight
    return a


def power_dictionary(zeta, degree):
    """Entrywise power dictionary for conditional-mean testing.

    Expands each raw coordinate into its powers 1..degree (grouped by
    coordinate) and returns the expanded design together with a function
    mapping an evaluation point to the corresponding loading vector.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    zeta = np.atleast_2d(np.asarray(zeta, dtype=float))
    k = zeta.shape[1]

    def expand(m):
        cols = []
        for j in range(k):
            for d in range(1, degree + 1):
                cols.append(m[:, j] ** d)
        return np.column_stack(cols)

    x = expand(zeta)

    def loading_at(point):
        point = np.asarray(point, dtype=float).ravel()
        if point.size != k:
            raise IndexOutOfRange(f"evaluation point has length {point.size}, expected {k}")
        return expand(point[None, :])[0]

    return x, loading_at


@dataclass
class _GridOutcome:
    g0: float
    reject: bool
    determined: bool


def confidence_interval(x, y, a, alpha=0.05, method=KNOWN_SIGMA, sigma=None,
                        tuning=None, grid=None):
    """Interval for a'beta by inverting the chosen test over a g0 grid.

    grid is (center, half_width, step); when omitted the grid is centered at a
    plug-in point estimate with half-width 10 ||a||_2 / sqrt(n) and 401 points.
    The returned interval is the hull of non-rejected grid points; a
    non-contiguous acceptance region is flagged, and (unknown path only) grid
    points with an infeasible selector are counted as undetermined.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    a = np.asarray(a, dtype=float).ravel()
    n, p = x.shape
    if method == KNOWN_SIGMA:
        if sigma is None:
            raise ValueError("known-covariance inversion requires sigma")
        feats = decompose_known(x, a, sigma)
        z = feats.z
        w_tilde = None
    elif method == UNKNOWN_SIGMA:
        if tuning is None:
            tuning = default_tuning(n, p)
        feats = decompose_unknown(x, a)
        z = feats.z
        w_tilde = feats.w_tilde
        gamma_hat, gamma_ok = fit_gamma(w_tilde, z, tuning)
        if not gamma_ok:
            raise InfeasibleEstimator("gamma selector infeasible")
        u_res = z - w_tilde @ gamma_hat
    else:
        raise ValueError(f"unknown method {method!r}")

    if grid is None:
        center = _plugin_center(method, z, y, w_tilde, tuning)
        half_width = 10.0 * float(np.linalg.norm(a)) / math.sqrt(n)
        step = half_width / 200.0
    else:
        center, half_width, step = grid
        if step <= 0:
            raise ValueError("grid step must be positive")
    n_steps = int(round(half_width / step)) if half_width > 0 else 0
    grid_points = center + step * np.arange(-n_steps, n_steps + 1)

    crit = normal_quantile(1.0 - alpha / 2.0)
    outcomes = []
    for g0 in grid_points:
        if method == KNOWN_SIGMA:
            l = z * (y - z * g0)
            denom = float(np.dot(l, l))
            if denom == 0.0:
                outcomes.append(_GridOutcome(g0, True, False))
                continue
            stat = float(np.sum(l)) / math.sqrt(denom)
            outcomes.append(_GridOutcome(float(g0), abs(stat) > crit, True))
        else:
            v = y - z * g0
            pi_hat, _, ok = fit_pi_rho(w_tilde, v, tuning)
            if not ok:
                outcomes.append(_GridOutcome(float(g0), True, False))
                continue
            e_res = v - w_tilde @ pi_hat
            nu, ne = np.linalg.norm(u_res), np.linalg.norm(e_res)
            if nu < 1e-12 or ne < 1e-12:
                outcomes.append(_GridOutcome(float(g0), True, False))
                continue
            stat = math.sqrt(n) * float(np.dot(u_res, e_res)) / (nu * ne)
            outcomes.append(_GridOutcome(float(g0), abs(stat) > crit, True))

    accepted = [o.g0 for o in outcomes if o.determined and not o.reject]
    n_undetermined = sum(1 for o in outcomes if not o.determined)
    if not accepted:
        raise EmptyAcceptanceRegion(
            "every grid point rejected; the grid is likely mis-centered")
    determined = [o for o in outcomes if o.determined]
    first = next(i for i, o in enumerate(determined) if not o.reject)
    last = len(determined) - 1 - next(
        i for i, o in enumerate(reversed(determined)) if not o.reject)
    contiguous = all(not o.reject for o in determined[first:last + 1])
    return ConfidenceInterval(
        lower=float(min(accepted)),
        upper=float(max(accepted)),
        level=1.0 - alpha,
        grid_resolution=float(step),
        contiguous=contiguous,
        n_undetermined=n_undetermined,
    )


def _plugin_center(method, z, y, w_tilde, tuning):
    zz = float(np.dot(z, z))
    if zz == 0.0:
        raise ZeroLoading("synthesized feature is identically zero")
    naive = float(np.dot(z, y)) / zz
    if method == KNOWN_SIGMA:
        return naive
    # One correction pass: refit pi at the naive center and re-solve for g0.
    pi_hat, _, ok = fit_pi_rho(w_tilde, y - z * naive, tuning)
    if not ok:
        return naive
    return float(np.dot(z, y - w_tilde @ pi_hat)) / zz
