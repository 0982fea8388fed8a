"""Hypothesis-driven feature synthetization.

Given a loading vector a, the design is decomposed row-wise as
x_i = a z_i + w_i, where z_i carries all information about the tested
functional.  With a known feature covariance the projection direction is
Omega a / (a' Omega a); without it, a / (a'a) is used and the orthogonal
component is consolidated into p-1 well-conditioned columns via an
orthonormal complement basis.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateProjection, DimensionMismatch, ZeroLoading
from .numerics import householder_complement, solve_spd


@dataclass(frozen=True)
class Hypothesis:
    """Null hypothesis a' beta = g0."""

    a: np.ndarray
    g0: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).ravel()
        if not np.all(np.isfinite(a)) or np.linalg.norm(a) == 0.0:
            raise ZeroLoading("loading must be finite with positive norm")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "g0", float(self.g0))


@dataclass
class SynthFeaturesKnown:
    """Features for the known-covariance path.

    z = X b with b = Omega a / (a' Omega a).  The orthogonal component w is
    n x p and only needed for diagnostics, so it is materialized on demand.
    """

    z: np.ndarray
    b: np.ndarray
    _x: np.ndarray = field(repr=False)
    _a: np.ndarray = field(repr=False)

    @property
    def w(self):
        return self._x - np.outer(self.z, self._a)


@dataclass
class SynthFeaturesUnknown:
    z: np.ndarray
    w_tilde: np.ndarray
    u_a: np.ndarray


def decompose_known(x, a, sigma):
    """Synthesize z and the projection direction using the known covariance."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float).ravel()
    if x.ndim != 2 or x.shape[1] != a.size:
        raise DimensionMismatch("design and loading dimensions disagree")
    if np.linalg.norm(a) == 0.0:
        raise ZeroLoading("loading vector has zero norm")
    omega_a = solve_spd(sigma, a)
    denom = float(np.dot(a, omega_a))
    if denom <= 1e-12:
        raise DegenerateProjection("a' Omega a is numerically zero")
    b = omega_a / denom
    z = x @ b
    return SynthFeaturesKnown(z=z, b=b, _x=x, _a=a)


def decompose_unknown(x, a):
    """Synthesize z and the stabilized features without covariance knowledge.

    w_tilde is computed as X @ U_a directly; this equals U_a' applied to the
    projected rows because U_a' (I - a a'/a'a) = U_a'.
    """
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float).ravel()
    if x.ndim != 2 or x.shape[1] != a.size:
        raise DimensionMismatch("design and loading dimensions disagree")
    if x.shape[0] < 2 or a.size < 2:
        raise DimensionMismatch("need n >= 2 and p >= 2")
    nrm2 = float(np.dot(a, a))
    if nrm2 == 0.0:
        raise ZeroLoading("loading vector has zero norm")
    z = x @ (a / nrm2)
    u_a = householder_complement(a)
    w_tilde = x @ u_a
    return SynthFeaturesUnknown(z=z, w_tilde=w_tilde, u_a=u_a)
