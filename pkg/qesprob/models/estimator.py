import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

# 4*pi/81: steering-ellipsoid volume above which a state is necessarily entangled
ENTANGLEMENT_THRESHOLD = 4 * math.pi / 81
DEFAULT_BATCH_SIZE = 200_000


class EstimatorAccumulator(BaseModel):
    """Mergeable running sums for the weighted separability estimate.

    Samples go into an open batch which is sealed into ``batch_estimates``
    once it holds ``batch_size`` samples.
    """
    batch_size: int = Field(DEFAULT_BATCH_SIZE, ge=1)
    threshold: float = ENTANGLEMENT_THRESHOLD

    n_total: int = 0
    n_excluded: int = 0
    sum_w: float = 0.0
    sum_w_sep: float = 0.0
    sum_w_above_threshold: float = 0.0
    sum_w_below_threshold: float = 0.0
    sum_w_sep_below_threshold: float = 0.0
    sum_v_a: float = 0.0

    # unweighted diagnostics
    n_counted: int = 0
    n_sep: int = 0
    n_above_threshold: int = 0
    n_sep_below_threshold: int = 0
    n_threshold_violations: int = 0
    sum_purity: float = 0.0

    # open batch
    batch_n: int = 0
    batch_sum_w: float = 0.0
    batch_sum_w_sep: float = 0.0
    batch_sum_w_above: float = 0.0

    batch_estimates: List[Tuple[int, float]] = Field(default_factory=list)

    @property
    def has_open_batch(self) -> bool:
        return self.batch_n > 0


class BatchRow(BaseModel):
    """One per-batch CSV row"""
    batch_index: int
    n_samples: int
    n_excluded: int
    weight_sum: float
    sep_weight_sum: float
    batch_estimate: Optional[float]
    running_estimate: Optional[float]
    p_above_threshold: Optional[float]


class EstimateSummary(BaseModel):
    """Final estimate and diagnostics for one run"""
    estimate: float = Field(ge=0, le=1)
    std_error: float = Field(ge=0)
    std_error_defined: bool = True
    p_above_threshold: float = Field(ge=0, le=1)
    entangled_fraction_below_threshold: Optional[float] = Field(None, ge=0, le=1)
    entangled_share_below_threshold: Optional[float] = Field(None, ge=0, le=1)
    mean_v_a_relative: float = Field(ge=0)
    mean_v_a_ball_fraction: float = Field(ge=0)
    n_total: int
    n_excluded: int
    n_batches: int
    batch_median: float
    batch_mean: float
    batch_variance: float
    batch_min: float
    batch_max: float

    unweighted_separable_fraction: float = Field(ge=0, le=1)
    unweighted_p_above_threshold: float = Field(ge=0, le=1)
    unweighted_entangled_fraction_below_threshold: Optional[float] = Field(None, ge=0, le=1)
    n_threshold_violations: int = 0
    mean_purity: float = Field(ge=0, le=1)

    reference_value: Optional[float] = None
    ratio_to_reference: Optional[float] = None
