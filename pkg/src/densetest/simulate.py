"""Monte Carlo harness for size and power experiments.

Campaigns draw replicated datasets from one of three design families, test
H0: a'beta = a'beta + h over a grid of offsets h, and aggregate rejection
rates, the null-statistic sample, a KS check against N(0,1), and selector
feasibility counts.  Replication r always uses the RNG stream seeded with
base_seed + r, so results are independent of worker scheduling.
"""

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dantzig import Tuning, default_tuning, fit_gamma, fit_pi_rho
from .errors import DensetestError, NotPositiveDefinite
from .numerics import cholesky, ks_test_standard_normal, normal_quantile, solve_spd
from .synthesize import decompose_unknown

TOEPLITZ = "toeplitz"
EQUI_CORRELATION = "equi_correlation"
FAN_SONG_MIXED = "fan_song_mixed"

SPARSE, DENSE = "sparse", "dense"

KNOWN_SIGMA = "known_sigma"
UNKNOWN_SIGMA = "unknown_sigma"

# Mixture tail block: "N(1, 0.5)" is read as variance 0.5.
_MIX_SD = math.sqrt(0.5)


class CampaignFailure(DensetestError):
    """More than 20% of replications errored."""


@dataclass(frozen=True)
class SimConfig:
    design: str = TOEPLITZ
    beta_regime: str = SPARSE
    loading_regime: str = SPARSE
    n: int = 100
    p: int = 150
    reps: int = 200
    alpha: float = 0.05
    h_grid: tuple = (0.0,)
    method: str = KNOWN_SIGMA  # known_sigma | unknown_sigma | both
    base_seed: int = 0
    tuning: Tuning = None
    workers: int = None

    def to_dict(self):
        out = {
            "design": self.design,
            "beta_regime": self.beta_regime,
            "loading_regime": self.loading_regime,
            "n": self.n,
            "p": self.p,
            "reps": self.reps,
            "alpha": self.alpha,
            "h_grid": list(self.h_grid),
            "method": self.method,
            "base_seed": self.base_seed,
        }
        if self.tuning is not None:
            out["tuning"] = {"eta": self.tuning.eta, "lam": self.tuning.lam,
                             "rho0": self.tuning.rho0}
        return out

    @classmethod
    def from_dict(cls, d):
        tuning = None
        if d.get("tuning"):
            t = d["tuning"]
            tuning = Tuning(eta=t["eta"], lam=t["lam"], rho0=t["rho0"])
        return cls(
            design=d.get("design", TOEPLITZ),
            beta_regime=d.get("beta_regime", SPARSE),
            loading_regime=d.get("loading_regime", SPARSE),
            n=int(d["n"]),
            p=int(d["p"]),
            reps=int(d.get("reps", 200)),
            alpha=float(d.get("alpha", 0.05)),
            h_grid=tuple(float(h) for h in d.get("h_grid", [0.0])),
            method=d.get("method", KNOWN_SIGMA),
            base_seed=int(d.get("base_seed", 0)),
            tuning=tuning,
            workers=d.get("workers"),
        )


@dataclass
class SimResult:
    method: str
    h_grid: tuple
    rejection_rate: dict  # h -> rate over determined reps
    n_determined: dict  # h -> count
    null_stats: np.ndarray  # statistics at h = 0 (nan where undetermined)
    ks_statistic: float
    ks_p_value: float
    feasibility_rate: float  # unknown path only; 1.0 otherwise
    n_errors: int
    error_log: list = field(default_factory=list)
    wall_time: float = 0.0


def design_covariance(design, p):
    """Population feature covariance of the named design."""
    if design == TOEPLITZ:
        idx = np.arange(p)
        return 0.4 ** np.abs(idx[:, None] - idx[None, :])
    if design == EQUI_CORRELATION:
        return np.full((p, p), 0.4) + 0.6 * np.eye(p)
    if design == FAN_SONG_MIXED:
        if p < 45:
            raise ValueError(
                "mixed design requires p >= 45 so the 15 correlated variables "
                "fit inside the first third")
        sigma = np.eye(p)
        sigma[:15, :15] = np.full((15, 15), 0.4) + 0.6 * np.eye(15)
        third, two_thirds = p // 3, (2 * p) // 3
        for j in range(third, two_thirds):
            sigma[j, j] = 2.0  # double exponential, scale 1
        for j in range(two_thirds, p):
            sigma[j, j] = 1.75  # half-half mixture of N(-1,1) and N(1,0.5)
        return sigma
    raise ValueError(f"unknown design {design!r}")


def gen_design(design, n, p, rng, chol_factor=None):
    """Draw an n x p design matrix from the named family."""
    if design in (TOEPLITZ, EQUI_CORRELATION):
        if chol_factor is None:
            chol_factor = cholesky(design_covariance(design, p))
        return rng.standard_normal((n, p)) @ chol_factor.T
    if design == FAN_SONG_MIXED:
        if p < 45:
            raise ValueError(
                "mixed design requires p >= 45 so the 15 correlated variables "
                "fit inside the first third")
        c = math.sqrt(1.5)  # solves 1/(1+c^2) = corr(x1, x2) = 0.4
        x = np.empty((n, p))
        xi = rng.standard_normal(n)
        xi_j = rng.standard_normal((n, 15))
        x[:, :15] = (xi[:, None] + c * xi_j) / math.sqrt(1.0 + c * c)
        third, two_thirds = p // 3, (2 * p) // 3
        x[:, 15:third] = rng.standard_normal((n, third - 15))
        if two_thirds > third:
            u = rng.uniform(size=(n, two_thirds - third))
            # inverse-CDF double exponential, location 0, scale 1
            x[:, third:two_thirds] = np.where(
                u < 0.5, np.log(2.0 * u), -np.log(2.0 * (1.0 - u)))
        if p > two_thirds:
            k = p - two_thirds
            pick = rng.uniform(size=(n, k)) < 0.5
            draws = rng.standard_normal((n, k))
            x[:, two_thirds:] = np.where(pick, -1.0 + draws, 1.0 + _MIX_SD * draws)
        return x
    raise ValueError(f"unknown design {design!r}")


def gen_regime(beta_regime, loading_regime, p):
    """Parameter and loading vectors for the four sparse/dense regimes."""
    if p < 2:
        raise ValueError("need p >= 2")
    if beta_regime == SPARSE:
        beta = np.zeros(p)
        beta[0] = beta[1] = 0.8
    elif beta_regime == DENSE:
        beta = np.full(p, 3.0 / math.sqrt(p))
    else:
        raise ValueError(f"unknown beta regime {beta_regime!r}")
    if loading_regime == SPARSE:
        a = np.zeros(p)
        a[1] = 1.0
    elif loading_regime == DENSE:
        a = np.ones(p)
    else:
        raise ValueError(f"unknown loading regime {loading_regime!r}")
    return beta, a


def local_alternative_offset(sigma, a, sigma_eps, d, n):
    """Offset h_n = n^{-1/2} (a' Omega a)^{1/2} sigma_eps d."""
    a = np.asarray(a, dtype=float).ravel()
    quad = float(np.dot(a, solve_spd(sigma, a)))
    if quad < 0:
        raise NotPositiveDefinite("a' Omega a negative")
    return math.sqrt(quad) * sigma_eps * d / math.sqrt(n)


def _run_rep(task):
    """One replication: returns per-method decisions, null stat, diagnostics."""
    (r, design, n, p, chol_factor, beta, a, h_grid, crit, methods, tuning,
     base_seed, b_known) = task
    out = {"rep": r, "error": None}
    try:
        rng = np.random.default_rng(base_seed + r)
        x = gen_design(design, n, p, rng, chol_factor)
        eps = rng.standard_normal(n)
        y = x @ beta + eps
        g_true = float(np.dot(a, beta))

        if KNOWN_SIGMA in methods:
            z = x @ b_known
            rejects, stat0 = [], None
            for h in h_grid:
                l = z * (y - z * (g_true + h))
                denom = float(np.dot(l, l))
                if denom == 0.0:
                    rejects.append(None)
                    continue
                stat = float(np.sum(l)) / math.sqrt(denom)
                if h == 0.0:
                    stat0 = stat
                rejects.append(abs(stat) > crit)
            out[KNOWN_SIGMA] = {"rejects": rejects, "stat0": stat0, "infeasible": 0}

        if UNKNOWN_SIGMA in methods:
            feats = decompose_unknown(x, a)
            gamma_hat, gamma_ok = fit_gamma(feats.w_tilde, feats.z, tuning)
            rejects, stat0, n_inf = [], None, 0
            if not gamma_ok:
                n_inf += 1
                rejects = [None] * len(h_grid)
            else:
                u_res = feats.z - feats.w_tilde @ gamma_hat
                nu = float(np.linalg.norm(u_res))
                for h in h_grid:
                    v = y - feats.z * (g_true + h)
                    pi_hat, _, pi_ok = fit_pi_rho(feats.w_tilde, v, tuning)
                    if not pi_ok:
                        n_inf += 1
                        rejects.append(None)
                        continue
                    e_res = v - feats.w_tilde @ pi_hat
                    ne = float(np.linalg.norm(e_res))
                    if nu < 1e-12 or ne < 1e-12:
                        rejects.append(None)
                        continue
                    stat = math.sqrt(n) * float(np.dot(u_res, e_res)) / (nu * ne)
                    if h == 0.0:
                        stat0 = stat
                    rejects.append(abs(stat) > crit)
            out[UNKNOWN_SIGMA] = {"rejects": rejects, "stat0": stat0,
                                  "infeasible": n_inf}
    except Exception as exc:  # per-rep failures are logged, not fatal
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def _worker_count(config):
    if config.workers is not None:
        return max(1, int(config.workers))
    env = os.environ.get("DENSETEST_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_campaign(config):
    """Run the configured campaign.

    Returns {method: SimResult}; a 'both' campaign shares replication draws
    between the two methods.
    """
    t0 = time.time()
    methods = ([KNOWN_SIGMA, UNKNOWN_SIGMA] if config.method == "both"
               else [config.method])
    if config.method not in ("both", KNOWN_SIGMA, UNKNOWN_SIGMA):
        raise ValueError(f"unknown method {config.method!r}")
    if config.reps < 1 or not config.h_grid:
        raise ValueError("reps >= 1 and a non-empty h grid are required")
    if not 0.0 < config.alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")

    beta, a = gen_regime(config.beta_regime, config.loading_regime, config.p)
    crit = normal_quantile(1.0 - config.alpha / 2.0)
    tuning = config.tuning or default_tuning(config.n, config.p)

    chol_factor = None
    if config.design in (TOEPLITZ, EQUI_CORRELATION):
        chol_factor = cholesky(design_covariance(config.design, config.p))

    b_known = None
    if KNOWN_SIGMA in methods:
        sigma = design_covariance(config.design, config.p)
        omega_a = solve_spd(sigma, a)
        b_known = omega_a / float(np.dot(a, omega_a))

    tasks = [
        (r, config.design, config.n, config.p, chol_factor, beta, a,
         tuple(config.h_grid), crit, tuple(methods), tuning, config.base_seed,
         b_known)
        for r in range(config.reps)
    ]
    workers = _worker_count(config)
    if workers > 1 and config.reps > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_run_rep, tasks, chunksize=max(1, config.reps // (4 * workers))))
    else:
        raw = [_run_rep(t) for t in tasks]
    raw.sort(key=lambda d: d["rep"])  # scheduling-order independence

    errors = [(d["rep"], d["error"]) for d in raw if d["error"]]
    if len(errors) > 0.2 * config.reps:
        raise CampaignFailure(f"{len(errors)}/{config.reps} replications errored: "
                              f"{errors[:3]}")

    elapsed = time.time() - t0
    results = {}
    for method in methods:
        per_rep = [d.get(method) for d in raw if d["error"] is None]
        nh = len(config.h_grid)
        rates, counts = {}, {}
        for i, h in enumerate(config.h_grid):
            decisions = [pr["rejects"][i] for pr in per_rep
                         if pr["rejects"][i] is not None]
            counts[h] = len(decisions)
            rates[h] = (sum(decisions) / len(decisions)) if decisions else float("nan")
        stats = np.array([pr["stat0"] if pr["stat0"] is not None else np.nan
                          for pr in per_rep])
        valid = stats[~np.isnan(stats)]
        if 0.0 in config.h_grid and valid.size >= 10:
            ks_stat, ks_p = ks_test_standard_normal(valid)
        else:
            ks_stat, ks_p = float("nan"), float("nan")
        total_fits = len(per_rep) * (nh if method == UNKNOWN_SIGMA else 1)
        n_inf = sum(pr["infeasible"] for pr in per_rep)
        feas = 1.0 - n_inf / total_fits if total_fits else float("nan")
        results[method] = SimResult(
            method=method,
            h_grid=tuple(config.h_grid),
            rejection_rate=rates,
            n_determined=counts,
            null_stats=stats,
            ks_statistic=ks_stat,
            ks_p_value=ks_p,
            feasibility_rate=feas if method == UNKNOWN_SIGMA else 1.0,
            n_errors=len(errors),
            error_log=[f"rep {r}: {msg}" for r, msg in errors],
            wall_time=elapsed,
        )
    return results


def write_csv(result, path):
    """Delimited summary: one row per offset h."""
    lines = ["h,rejection_rate,n_reps,n_errors,n_infeasible"]
    n_inf_total = 0
    for h in result.h_grid:
        n_det = result.n_determined[h]
        n_inf = (len(result.null_stats) + result.n_errors - n_det
                 if result.method == UNKNOWN_SIGMA else 0)
        n_inf_total += n_inf
        lines.append(f"{h!r},{result.rejection_rate[h]!r},{n_det},"
                     f"{result.n_errors},{n_inf}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(config, result, path):
    """Full record: config echo, rates, KS check, per-rep null statistics."""
    payload = {
        "config": config.to_dict(),
        "method": result.method,
        "rejection_rate": {repr(h): result.rejection_rate[h] for h in result.h_grid},
        "n_determined": {repr(h): result.n_determined[h] for h in result.h_grid},
        "ks_statistic": result.ks_statistic,
        "ks_p_value": result.ks_p_value,
        "feasibility_rate": result.feasibility_rate,
        "n_errors": result.n_errors,
        "error_log": result.error_log,
        "null_statistics": [None if math.isnan(s) else s for s in result.null_stats],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
