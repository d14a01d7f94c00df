"""Error types raised by the qesprob engine."""


class QesprobError(Exception):
    """Base class for all engine errors"""


class NotHermitian(QesprobError):
    """Input to the Hermitian eigen-solver is not Hermitian within tolerance"""


class ConvergenceFailure(QesprobError):
    """The eigen-solver did not converge"""


class RankDeficient(QesprobError):
    """QR factorization produced a vanishing diagonal entry of R"""


class DimensionMismatch(QesprobError):
    """Operation requires a two-qubit (4x4) matrix"""


class DegenerateSample(QesprobError):
    """Normalization trace of a sampled state vanished"""


class SingularBloch(QesprobError):
    """Reduced state is pure while det(rho) - det(rho^T_B) is not zero"""


class InvalidState(QesprobError):
    """A matrix failed the density-matrix invariants"""


class ConfigMismatch(QesprobError):
    """Accumulators built with different batch sizes or thresholds were merged"""


class EmptyAccumulator(QesprobError):
    """Summary requested from an accumulator with zero total weight"""
