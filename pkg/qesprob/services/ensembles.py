"""Seeded random generation of Ginibre matrices, Haar unitaries and random states.

Stream derivation: ``(master_seed, chunk_index)`` feeds
``SeedSequence(entropy=master_seed, spawn_key=(chunk_index,))``, the same
construction ``SeedSequence.spawn`` uses for its children, so distinct pairs
give distinct, statistically independent PCG64 streams.

Draw order inside a stream is part of the reproducibility contract. Normals
are consumed sample by sample: each Ginibre matrix takes its real parts, then
its imaginary parts; each Bures sample takes A, then the matrix that becomes
U. Drawing a stack in one call or in consecutive blocks gives the same states.
"""

import logging
from typing import Optional

import numpy as np

from ..exceptions import DegenerateSample
from ..models.base import EnsembleName, FieldTag
from ..models.ensembles import EnsembleKind, SeedSpec
from ..models.states import DensityMatrix
from .numeric_kernel import dagger, unitary_from_qr

logger = logging.getLogger(__name__)

MIN_TRACE = 1e-100


def derive_stream(seed: SeedSpec) -> np.random.Generator:
    sequence = np.random.SeedSequence(entropy=seed.master_seed, spawn_key=(seed.chunk_index,))
    return np.random.Generator(np.random.PCG64(sequence))


def _complex_from_parts(parts: np.ndarray) -> np.ndarray:
    # parts[..., 0, :, :] real, parts[..., 1, :, :] imaginary
    return parts[..., 0, :, :] + 1j * parts[..., 1, :, :]


def sample_ginibre(
    dim: int,
    field: FieldTag,
    rng: np.random.Generator,
    count: Optional[int] = None,
    cols: Optional[int] = None,
) -> np.ndarray:
    """``dim x cols`` matrix (or ``count`` of them) with independent standard-normal components.

    ``cols`` defaults to ``dim``.
    """
    cols = dim if cols is None else cols
    lead = () if count is None else (count,)
    if field == FieldTag.REAL:
        return rng.standard_normal(lead + (dim, cols)).astype(complex)
    return _complex_from_parts(rng.standard_normal(lead + (2, dim, cols)))


def _normalize(products: np.ndarray) -> np.ndarray:
    traces = np.trace(products, axis1=-2, axis2=-1).real
    if np.any(traces < MIN_TRACE):
        raise DegenerateSample(f"normalization trace {traces.min():.3e} below {MIN_TRACE}")
    rho = products / traces[..., None, None]
    # enforce exact Hermiticity against rounding in the product
    return 0.5 * (rho + dagger(rho))


def hs_columns(cfg: EnsembleKind) -> int:
    return cfg.dim + 1 if cfg.field == FieldTag.REAL else cfg.dim


def hs_states(cfg: EnsembleKind, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` Hilbert-Schmidt states, rho = A A^dagger / Tr(A A^dagger).

    The flat measure needs a square complex A, but a ``dim x (dim+1)`` real one.
    """
    if cfg.kind != EnsembleName.HILBERT_SCHMIDT:
        raise ValueError(f"hs_states called with a {cfg.kind.value} ensemble")
    a = sample_ginibre(cfg.dim, cfg.field, rng, count, cols=hs_columns(cfg))
    return _normalize(a @ dagger(a))


def bures_states(cfg: EnsembleKind, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` Bures states, rho proportional to (1+U) A A^dagger (1+U^dagger)."""
    if cfg.kind != EnsembleName.BURES or cfg.field != FieldTag.COMPLEX:
        raise ValueError("bures_states needs a complex Bures ensemble")
    lead = () if count is None else (count,)
    draws = _complex_from_parts(rng.standard_normal(lead + (2, 2, cfg.dim, cfg.dim)))
    a, u = draws[..., 0, :, :], unitary_from_qr(draws[..., 1, :, :])
    b = (np.eye(cfg.dim) + u) @ a
    return _normalize(b @ dagger(b))


def sample_states(cfg: EnsembleKind, rng: np.random.Generator, count: int) -> np.ndarray:
    if cfg.kind == EnsembleName.BURES:
        return bures_states(cfg, rng, count)
    return hs_states(cfg, rng, count)


def sample_hs_state(cfg: EnsembleKind, rng: np.random.Generator) -> DensityMatrix:
    return DensityMatrix(matrix=hs_states(cfg, rng, 1)[0], field=cfg.field)


def sample_bures_state(cfg: EnsembleKind, rng: np.random.Generator) -> DensityMatrix:
    return DensityMatrix(matrix=bures_states(cfg, rng, 1)[0], field=cfg.field)
