"""Exception hierarchy shared across the package."""


class DensetestError(Exception):
    """Base class for all package-specific errors."""


class NotPositiveDefinite(DensetestError):
    """Matrix passed to a Cholesky-based routine is not positive definite."""


class ZeroLoading(DensetestError):
    """Loading vector has zero Euclidean norm."""


class OutOfRange(DensetestError):
    """Probability argument outside the open interval (0, 1)."""


class TooFewSamples(DensetestError):
    """Sample too small for the requested distributional check."""


class DimensionMismatch(DensetestError):
    """Inconsistent array dimensions."""


class LpIterationLimit(DensetestError):
    """Simplex pivot budget exhausted; signals numerical trouble, not infeasibility."""


class ZeroResidualVector(DensetestError):
    """Residual vector V = Y - Z g0 has zero norm."""


class ZeroSynthesizedFeature(DensetestError):
    """Synthesized feature vector Z has zero norm."""


class DegenerateProjection(DensetestError):
    """a' Omega a is numerically zero; projection direction undefined."""


class DegenerateStatistic(DensetestError):
    """All test-statistic summands are zero; studentization impossible."""


class DegenerateResidual(DensetestError):
    """A residual norm in the self-normalized statistic is numerically zero."""


class InfeasibleEstimator(DensetestError):
    """A constrained l1 estimator's LP was infeasible; no decision is fabricated."""


class EmptyAcceptanceRegion(DensetestError):
    """Every grid point was rejected during interval inversion."""


class IndexOutOfRange(DensetestError):
    """Feature index outside 1..p or otherwise invalid."""


class DataFormatError(DensetestError):
    """Malformed input data file (non-numeric cell, ragged rows, missing value)."""

    def __init__(self, message, row=None, col=None):
        super().__init__(message)
        self.row = row
        self.col = col
