"""Linear-functional hypothesis tests for high-dimensional linear models.

Tests H0: a'beta = g0 without sparsity assumptions on beta or the loading a,
with and without knowledge of the feature covariance, plus confidence
intervals by test inversion and a Monte Carlo harness for size/power studies.
"""

from .dantzig import DantzigFit, Tuning, default_tuning, fit_gamma, fit_pi_rho
from .inference import (
    KNOWN_SIGMA,
    UNKNOWN_SIGMA,
    ConfidenceInterval,
    TestReport,
    confidence_interval,
    group_loading,
    pairwise_loading,
    power_dictionary,
    power_envelope,
    test_known_sigma,
    test_unknown_sigma,
)
from .lp import LpProblem, LpSolution, solve_lp
from .simulate import SimConfig, SimResult, run_campaign
from .synthesize import Hypothesis, decompose_known, decompose_unknown

__version__ = "0.1.0"

__all__ = [
    "ConfidenceInterval",
    "DantzigFit",
    "Hypothesis",
    "KNOWN_SIGMA",
    "LpProblem",
    "LpSolution",
    "SimConfig",
    "SimResult",
    "TestReport",
    "Tuning",
    "UNKNOWN_SIGMA",
    "confidence_interval",
    "decompose_known",
    "decompose_unknown",
    "default_tuning",
    "fit_gamma",
    "fit_pi_rho",
    "group_loading",
    "pairwise_loading",
    "power_dictionary",
    "power_envelope",
    "run_campaign",
    "solve_lp",
    "test_known_sigma",
    "test_unknown_sigma",
]
