# Models package for qesprob

from .base import (
    ComplexMatrix,
    CrossDirection,
    EnsembleName,
    FieldTag,
    NumericModel,
    OutputFormat,
    Party,
    RealVector,
    WeightSchemeName,
)

from .kernel import Eigensystem

from .states import (
    BlochData,
    DensityMatrix,
    SeparabilityVerdict,
    density_violations,
)

from .ensembles import EnsembleKind, SeedSpec

from .weights import (
    BLOCH_BALL_VOLUME,
    QesData,
    WeightedSample,
    WeightScheme,
)

from .estimator import (
    DEFAULT_BATCH_SIZE,
    ENTANGLEMENT_THRESHOLD,
    BatchRow,
    EstimateSummary,
    EstimatorAccumulator,
)

from .run_config import RunConfig

__all__ = [
    # Base
    "ComplexMatrix", "CrossDirection", "EnsembleName", "FieldTag", "NumericModel",
    "OutputFormat", "Party", "RealVector", "WeightSchemeName",

    # Kernel and states
    "Eigensystem", "BlochData", "DensityMatrix", "SeparabilityVerdict", "density_violations",

    # Ensembles
    "EnsembleKind", "SeedSpec",

    # Weights
    "BLOCH_BALL_VOLUME", "QesData", "WeightedSample", "WeightScheme",

    # Estimator
    "DEFAULT_BATCH_SIZE", "ENTANGLEMENT_THRESHOLD", "BatchRow", "EstimateSummary",
    "EstimatorAccumulator",

    # Run configuration
    "RunConfig",
]
