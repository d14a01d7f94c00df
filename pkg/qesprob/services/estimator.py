"""Weighted ratio estimator with batch-means error bars.

Accumulators are single-writer; parallel runs keep one per chunk and merge
them in chunk order.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..exceptions import ConfigMismatch, EmptyAccumulator
from ..models.estimator import EstimateSummary, EstimatorAccumulator
from ..models.weights import BLOCH_BALL_VOLUME, WeightedSample

logger = logging.getLogger(__name__)

VIOLATION_MARGIN = 1e-12

_SUM_FIELDS = (
    "sum_w", "sum_w_sep", "sum_w_above_threshold", "sum_w_below_threshold",
    "sum_w_sep_below_threshold", "sum_v_a", "sum_purity",
)
_COUNT_FIELDS = (
    "n_total", "n_excluded", "n_counted", "n_sep", "n_above_threshold",
    "n_sep_below_threshold", "n_threshold_violations",
)


def _seal(acc: EstimatorAccumulator) -> None:
    estimate = acc.batch_sum_w_sep / acc.batch_sum_w if acc.batch_sum_w > 0 else math.nan
    acc.batch_estimates.append((acc.batch_n, estimate))
    acc.batch_n = 0
    acc.batch_sum_w = acc.batch_sum_w_sep = acc.batch_sum_w_above = 0.0


def _add_block(acc, weights, separable, volumes, purities) -> None:
    finite = np.isfinite(weights)
    w = np.where(finite, weights, 0.0)
    above = volumes > acc.threshold
    below_mask = finite & ~above

    w_sep = float(np.where(separable, w, 0.0).sum())
    w_sum = float(w.sum())
    w_above = float(np.where(above, w, 0.0).sum())

    acc.n_total += len(weights)
    acc.n_excluded += int((~finite).sum())
    acc.sum_w += w_sum
    acc.sum_w_sep += w_sep
    acc.sum_w_above_threshold += w_above
    acc.sum_w_below_threshold += float(np.where(above, 0.0, w).sum())
    acc.sum_w_sep_below_threshold += float(np.where(~above & separable, w, 0.0).sum())
    acc.sum_v_a += float(np.where(finite, volumes, 0.0).sum())
    acc.sum_purity += float(np.where(finite, purities, 0.0).sum())

    acc.n_counted += int(finite.sum())
    acc.n_sep += int((finite & separable).sum())
    acc.n_above_threshold += int((finite & above).sum())
    acc.n_sep_below_threshold += int((below_mask & separable).sum())
    acc.n_threshold_violations += int(((volumes > acc.threshold + VIOLATION_MARGIN) & separable).sum())

    acc.batch_n += len(weights)
    acc.batch_sum_w += w_sum
    acc.batch_sum_w_sep += w_sep
    acc.batch_sum_w_above += w_above


def accumulate_many(
    acc: EstimatorAccumulator,
    weights: Sequence[float],
    separable: Sequence[bool],
    volumes: Sequence[float],
    purities: Optional[Sequence[float]] = None,
) -> EstimatorAccumulator:
    """Fold a block of samples in order; non-finite weights only count as excluded."""
    weights = np.asarray(weights, dtype=float)
    separable = np.asarray(separable, dtype=bool)
    volumes = np.asarray(volumes, dtype=float)
    purities = np.zeros_like(weights) if purities is None else np.asarray(purities, dtype=float)
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")

    out = acc.model_copy(deep=True)
    start = 0
    while start < len(weights):
        stop = min(len(weights), start + out.batch_size - out.batch_n)
        part = slice(start, stop)
        _add_block(out, weights[part], separable[part], volumes[part], purities[part])
        if out.batch_n == out.batch_size:
            _seal(out)
        start = stop
    return out


def accumulate(acc: EstimatorAccumulator, sample: WeightedSample) -> EstimatorAccumulator:
    return accumulate_many(acc, [sample.weight], [sample.separable], [sample.v_a], [sample.purity])


def merge(a: EstimatorAccumulator, b: EstimatorAccumulator) -> EstimatorAccumulator:
    """Field-wise sums; b's batches follow a's.

    Open batches are combined when they fit in one batch; otherwise a's open
    batch is sealed short and b's stays open, so no batch exceeds batch_size.
    """
    if a.batch_size != b.batch_size:
        raise ConfigMismatch(f"batch sizes differ: {a.batch_size} vs {b.batch_size}")
    if a.threshold != b.threshold:
        raise ConfigMismatch(f"thresholds differ: {a.threshold} vs {b.threshold}")

    out = a.model_copy(deep=True)
    for name in _SUM_FIELDS + _COUNT_FIELDS:
        setattr(out, name, getattr(a, name) + getattr(b, name))
    if a.batch_n + b.batch_n > a.batch_size:
        _seal(out)
        out.batch_estimates += list(b.batch_estimates)
        out.batch_n = b.batch_n
        out.batch_sum_w = b.batch_sum_w
        out.batch_sum_w_sep = b.batch_sum_w_sep
        out.batch_sum_w_above = b.batch_sum_w_above
        return out
    out.batch_estimates = list(a.batch_estimates) + list(b.batch_estimates)
    out.batch_n = a.batch_n + b.batch_n
    out.batch_sum_w = a.batch_sum_w + b.batch_sum_w
    out.batch_sum_w_sep = a.batch_sum_w_sep + b.batch_sum_w_sep
    out.batch_sum_w_above = a.batch_sum_w_above + b.batch_sum_w_above
    if out.batch_n == out.batch_size:
        _seal(out)
    return out


def close_batch(acc: EstimatorAccumulator) -> EstimatorAccumulator:
    """Seal a partially filled open batch (e.g. the short last chunk of a run)."""
    out = acc.model_copy(deep=True)
    if out.has_open_batch:
        _seal(out)
    return out


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    if denominator <= 0:
        return None
    return min(1.0, max(0.0, numerator / denominator))


def summarize(acc: EstimatorAccumulator, reference_value: Optional[float] = None) -> EstimateSummary:
    if acc.sum_w <= 0:
        raise EmptyAccumulator(f"total weight is zero after {acc.n_total} samples ({acc.n_excluded} excluded)")

    estimate = _ratio(acc.sum_w_sep, acc.sum_w)
    batches = close_batch(acc).batch_estimates
    values = np.array([e for _, e in batches if math.isfinite(e)])
    k = len(values)
    variance = float(np.var(values, ddof=1)) if k > 1 else 0.0
    if k < 2:
        logger.warning("⚠️ Fewer than two batch estimates; std_error reported as 0")

    n_counted = max(acc.n_counted, 1)
    unweighted_below = acc.n_counted - acc.n_above_threshold
    w_entangled_below = acc.sum_w_below_threshold - acc.sum_w_sep_below_threshold
    below_separable = _ratio(acc.sum_w_sep_below_threshold, acc.sum_w_below_threshold)
    mean_v_a = acc.sum_v_a / n_counted

    return EstimateSummary(
        estimate=estimate,
        std_error=math.sqrt(variance / k) if k > 1 else 0.0,
        std_error_defined=k > 1,
        p_above_threshold=_ratio(acc.sum_w_above_threshold, acc.sum_w),
        entangled_fraction_below_threshold=_ratio(w_entangled_below, acc.sum_w),
        entangled_share_below_threshold=None if below_separable is None else 1.0 - below_separable,
        mean_v_a_relative=mean_v_a,
        mean_v_a_ball_fraction=mean_v_a / BLOCH_BALL_VOLUME,
        n_total=acc.n_total,
        n_excluded=acc.n_excluded,
        n_batches=k,
        batch_median=float(np.median(values)) if k else math.nan,
        batch_mean=float(np.mean(values)) if k else math.nan,
        batch_variance=variance,
        batch_min=float(values.min()) if k else math.nan,
        batch_max=float(values.max()) if k else math.nan,
        unweighted_separable_fraction=acc.n_sep / n_counted,
        unweighted_p_above_threshold=acc.n_above_threshold / n_counted,
        unweighted_entangled_fraction_below_threshold=(unweighted_below - acc.n_sep_below_threshold) / n_counted,
        n_threshold_violations=acc.n_threshold_violations,
        mean_purity=min(1.0, acc.sum_purity / n_counted),
        reference_value=reference_value,
        ratio_to_reference=None if not reference_value else estimate / reference_value,
    )
