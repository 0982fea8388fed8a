"""Dense linear algebra and distribution helpers.

Everything here is a pure function on numpy arrays: Cholesky factorization,
SPD solves, the orthonormal-complement basis used to stabilize features,
standard normal CDF/quantile, and the Kolmogorov-Smirnov check against N(0,1).
"""

import math

import numpy as np

from .errors import (
    NotPositiveDefinite,
    OutOfRange,
    TooFewSamples,
    ZeroLoading,
)

_PIVOT_RTOL = 1e-12


def cholesky(sigma):
    """Lower-triangular L with L L' = sigma.

    Raises NotPositiveDefinite when a pivot falls below 1e-12 times the
    largest diagonal entry.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise NotPositiveDefinite("matrix is not square")
    if not np.allclose(sigma, sigma.T, atol=1e-10):
        raise NotPositiveDefinite("matrix is not symmetric within 1e-10")
    max_diag = float(np.max(np.abs(np.diag(sigma)))) if sigma.size else 0.0
    try:
        L = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    if np.min(np.diag(L)) ** 2 <= _PIVOT_RTOL * max_diag:
        raise NotPositiveDefinite("pivot below relative tolerance 1e-12")
    return L


def solve_spd(sigma, b):
    """Solve sigma @ x = b for symmetric positive definite sigma."""
    L = cholesky(sigma)
    b = np.asarray(b, dtype=float)
    y = np.linalg.solve(L, b)
    return np.linalg.solve(L.T, y)


def householder_complement(a, p=None):
    """Orthonormal basis U (p x (p-1)) of the complement of span{a}.

    U satisfies U'U = I and U U' = I - a a'/(a'a).  The construction is the
    deterministic Householder reflector sending a to a signed multiple of e1
    (sign of a[0], zero treated as +, chosen to avoid cancellation); columns
    2..p of the reflector form U.
    """
    a = np.asarray(a, dtype=float).ravel()
    if p is None:
        p = a.size
    if a.size != p:
        raise ZeroLoading(f"loading has length {a.size}, expected {p}")
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        raise ZeroLoading("loading vector has zero norm")
    sign = 1.0 if a[0] >= 0 else -1.0
    u = a.copy()
    u[0] += sign * norm
    # H = I - 2 u u'/(u'u); symmetric, orthogonal, maps a to -sign*norm*e1.
    H = np.eye(p) - (2.0 / np.dot(u, u)) * np.outer(u, u)
    return H[:, 1:]


def normal_cdf(x):
    """Standard normal CDF via the complementary error function."""
    if np.ndim(x) == 0:
        return 0.5 * math.erfc(-float(x) / math.sqrt(2.0))
    x = np.asarray(x, dtype=float)
    return np.array([0.5 * math.erfc(-v / math.sqrt(2.0)) for v in x.ravel()]).reshape(x.shape)


# Acklam's rational approximation for the inverse normal CDF.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)


def normal_quantile(p):
    """Inverse standard normal CDF.

    Rational approximation followed by one Newton refinement on normal_cdf;
    the refined value satisfies |Phi(result) - p| < 1e-9.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise OutOfRange(f"probability {p} outside (0, 1)")
    p_low, p_high = 0.02425, 1 - 0.02425
    if p < p_low:
        q = math.sqrt(-2 * math.log(p))
        x = ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
             / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1))
    elif p <= p_high:
        q = p - 0.5
        r = q * q
        x = ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
             / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1))
    else:
        q = math.sqrt(-2 * math.log(1 - p))
        x = -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
              / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1))
    # One Newton step: x -= (Phi(x) - p) / phi(x).
    pdf = math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    if pdf > 0:
        x -= (normal_cdf(x) - p) / pdf
    return x


def ks_test_standard_normal(sample):
    """KS statistic and asymptotic p-value of a sample against N(0,1).

    The statistic is the exact sup-gap between the empirical CDF and Phi,
    evaluated at the sorted sample points.  The p-value uses the asymptotic
    Kolmogorov series with the small-sample-corrected argument
    lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) * D.
    """
    sample = np.asarray(sample, dtype=float).ravel()
    n = sample.size
    if n < 10:
        raise TooFewSamples(f"need at least 10 samples, got {n}")
    xs = np.sort(sample)
    cdf = normal_cdf(xs)
    i = np.arange(1, n + 1)
    d = float(np.max(np.maximum(i / n - cdf, cdf - (i - 1) / n)))
    lam = (math.sqrt(n) + 0.12 + 0.11 / math.sqrt(n)) * d
    total = 0.0
    for k in range(1, 101):
        term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
        total += term
        if abs(term) < 1e-10:
            break
    return d, min(max(total, 0.0), 1.0)
