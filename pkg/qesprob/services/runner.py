import csv
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..models.base import EnsembleName, FieldTag, OutputFormat, Party, WeightSchemeName
from ..models.ensembles import SeedSpec
from ..models.estimator import BatchRow, EstimateSummary, EstimatorAccumulator
from ..models.run_config import RunConfig
from .ensembles import derive_stream, sample_states
from .estimator import accumulate_many, close_batch, merge, summarize
from .numeric_kernel import hermitian_eigensystem
from .qes_weights import qes_volume_arrays, scheme_weights
from .states import purity, separable_mask, validate_states

logger = logging.getLogger(__name__)

CSV_HEADER = [
    "batch_index", "n_samples", "n_excluded", "weight_sum", "sep_weight_sum",
    "batch_estimate", "running_estimate", "p_above_threshold",
]
SUMMARY_KEYS = [
    "ensemble", "field", "weight_scheme", "samples", "batch_size", "master_seed",
    "estimate", "std_error", "n_excluded", "p_above_threshold",
    "entangled_fraction_below_threshold", "mean_v_a_relative",
    "batch_median", "batch_mean", "batch_variance",
]
SAMPLED_VALIDATION_STRIDE = 10_000

# Known separability probabilities of the target measures
REFERENCE_VALUES = {
    (EnsembleName.HILBERT_SCHMIDT, FieldTag.COMPLEX): 8 / 33,
    (EnsembleName.BURES, FieldTag.COMPLEX): 25 / 341,
    (EnsembleName.HILBERT_SCHMIDT, FieldTag.REAL): 29 / 64,
}


def reference_value(cfg: RunConfig) -> Optional[float]:
    """Separability probability of the measure the weights target, when it is known"""
    scheme = cfg.weight.scheme
    if scheme == WeightSchemeName.NONE:
        target = cfg.ensemble.kind
    elif scheme == WeightSchemeName.CROSS:
        target = (
            EnsembleName.HILBERT_SCHMIDT if cfg.ensemble.kind == EnsembleName.BURES else EnsembleName.BURES
        )
    else:
        return None
    return REFERENCE_VALUES.get((target, cfg.ensemble.field))


def _finite_or_none(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def summary_payload(cfg: RunConfig, summary: EstimateSummary) -> Dict[str, Any]:
    """Summary JSON: the fixed key list first, diagnostics after."""
    payload = {
        "ensemble": cfg.ensemble.kind.value,
        "field": cfg.ensemble.field.value,
        "weight_scheme": cfg.weight.scheme.value,
        "samples": cfg.samples,
        "batch_size": cfg.batch_size,
        "master_seed": cfg.master_seed,
    }
    values = summary.model_dump()
    for key in SUMMARY_KEYS[6:]:
        payload[key] = values.pop(key)
    payload["party"] = cfg.party.value
    payload["weight_cap"] = cfg.weight_cap
    payload.update(values)
    return {k: _finite_or_none(v) for k, v in payload.items()}


def output_paths(cfg: RunConfig) -> Tuple[Optional[Path], Optional[Path]]:
    base = Path(cfg.output_path)
    if base.suffix in (".json", ".csv"):
        base = base.with_suffix("")
    json_path = base.with_name(base.name + ".json")
    csv_path = base.with_name(base.name + ".csv")
    fmt = cfg.output_format
    return (
        json_path if fmt in (OutputFormat.JSON, OutputFormat.BOTH) else None,
        csv_path if fmt in (OutputFormat.CSV, OutputFormat.BOTH) else None,
    )


class EstimationRunner:
    """
    Runs one estimation: one seeded chunk per batch on a thread pool, merged
    in chunk order so results do not depend on the thread count.
    """

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.validation_stride = 1 if cfg.validate_states == "all" else SAMPLED_VALIDATION_STRIDE

    def _block_sizes(self, chunk_size: int):
        block = self.cfg.block_size
        sizes = [block] * (chunk_size // block)
        if chunk_size % block:
            sizes.append(chunk_size % block)
        return sizes

    def weigh_block(self, states: np.ndarray):
        """Weights, separability flags, party volumes and purities of a block of states."""
        cfg = self.cfg
        validate_states(states, cfg.ensemble.field, self.validation_stride)
        v_a, v_b, _, _ = qes_volume_arrays(states)
        volume = v_a if cfg.party == Party.ALICE else v_b
        eig = hermitian_eigensystem(states) if cfg.weight.uses_eigensystem else None
        weights = scheme_weights(cfg.weight, cfg.ensemble, len(states), volume=volume, eig=eig)
        if cfg.weight_cap is not None:
            weights = np.where(np.isfinite(weights), np.minimum(weights, cfg.weight_cap), weights)
        return weights, separable_mask(states), volume, purity(states)

    def run_chunk(self, chunk_index: int, chunk_size: int) -> EstimatorAccumulator:
        rng = derive_stream(SeedSpec(master_seed=self.cfg.master_seed, chunk_index=chunk_index))
        acc = EstimatorAccumulator(batch_size=self.cfg.batch_size)
        for size in self._block_sizes(chunk_size):
            states = sample_states(self.cfg.ensemble, rng, size)
            acc = accumulate_many(acc, *self.weigh_block(states))
        logger.debug(f"Chunk {chunk_index}: {chunk_size} samples, {acc.n_excluded} excluded")
        return close_batch(acc)

    def run(self) -> EstimateSummary:
        cfg = self.cfg
        json_path, csv_path = output_paths(cfg)
        sizes = cfg.chunk_sizes()
        logger.info(
            f"Starting {cfg.ensemble.kind.value}/{cfg.ensemble.field.value} run: weight={cfg.weight.scheme.value}, "
            f"samples={cfg.samples}, batches={len(sizes)}, seed={cfg.master_seed}, threads={cfg.threads}"
        )
        started = time.perf_counter()

        total = EstimatorAccumulator(batch_size=cfg.batch_size)
        csv_file = open(csv_path, "w", newline="") if csv_path else None
        try:
            writer = csv.writer(csv_file) if csv_file else None
            if writer:
                writer.writerow(CSV_HEADER)
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                chunks = pool.map(self.run_chunk, range(len(sizes)), sizes)
                for index, chunk in enumerate(chunks):
                    total = merge(total, chunk)
                    if writer:
                        writer.writerow(self._row(index, chunk, total).model_dump().values())
                        csv_file.flush()
        finally:
            if csv_file:
                csv_file.close()

        summary = summarize(total, reference_value(cfg))
        if summary.n_excluded:
            logger.warning(
                f"⚠️ {summary.n_excluded} of {summary.n_total} samples had non-finite weights and were excluded"
            )
        if json_path:
            with open(json_path, "w") as f:
                json.dump(summary_payload(cfg, summary), f, indent=2)
                f.write("\n")
        logger.info(f"✅ Run finished in {time.perf_counter() - started:.1f}s: estimate={summary.estimate!r}")
        return summary

    @staticmethod
    def _row(index: int, chunk: EstimatorAccumulator, total: EstimatorAccumulator) -> BatchRow:
        def ratio(num, den):
            return num / den if den > 0 else None

        return BatchRow(
            batch_index=index,
            n_samples=chunk.n_total,
            n_excluded=chunk.n_excluded,
            weight_sum=chunk.sum_w,
            sep_weight_sum=chunk.sum_w_sep,
            batch_estimate=ratio(chunk.sum_w_sep, chunk.sum_w),
            running_estimate=ratio(total.sum_w_sep, total.sum_w),
            p_above_threshold=ratio(chunk.sum_w_above_threshold, chunk.sum_w),
        )


def run_estimate(cfg: RunConfig) -> EstimateSummary:
    """Run an estimation and emit its CSV/JSON files"""
    return EstimationRunner(cfg).run()
