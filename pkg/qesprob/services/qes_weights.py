"""Steering-ellipsoid volumes and the importance weights built on them.

Weights drop the constant prefactors of the HS and Bures volume elements;
only ratios of weights matter to the estimator. A weight of +inf marks a
sample whose denominator vanished; the estimator counts it as excluded.
"""

import logging
import math
from typing import Optional, Union

import numpy as np

from ..exceptions import SingularBloch
from ..models.base import CrossDirection, EnsembleName, WeightSchemeName
from ..models.ensembles import EnsembleKind
from ..models.kernel import Eigensystem
from ..models.states import BlochData
from ..models.weights import QesData, WeightScheme
from .numeric_kernel import dagger, determinant
from .states import StateLike, bloch_norm_arrays, partial_transpose_b, two_qubit_matrix

logger = logging.getLogger(__name__)

VOLUME_PREFACTOR = 64 * math.pi / 3

SINGULAR_DENOMINATOR = 1e-24
SINGULAR_NUMERATOR = 1e-18
EIGEN_GAP_TOL = 1e-12
HS_TO_BURES_MIN_EIGENVALUE = 1e-15
UNITARY_FACTOR_TOL = 1e-14

Number = Union[float, np.ndarray]


def _out(value: np.ndarray) -> Number:
    return float(value) if np.ndim(value) == 0 else value


def _pairs(n: int):
    return np.triu_indices(n, k=1)


def _ellipsoid_volume(numerator: np.ndarray, norm: np.ndarray, party: str) -> np.ndarray:
    denominator = (1.0 - norm**2) ** 2
    singular = denominator < SINGULAR_DENOMINATOR
    if np.any(singular & (numerator >= SINGULAR_NUMERATOR)):
        raise SingularBloch(f"pure reduced state on {party}'s side with nonzero det difference")
    with np.errstate(divide="ignore", invalid="ignore"):
        volume = VOLUME_PREFACTOR * numerator / denominator
    return np.where(singular, 0.0, volume)


def qes_volume_arrays(rho: StateLike):
    """(v_a, v_b, a, b) for one state or a stack."""
    m = two_qubit_matrix(rho)
    numerator = np.abs(determinant(m).real - determinant(partial_transpose_b(m)).real)
    a, b = bloch_norm_arrays(m)
    v_a = _ellipsoid_volume(numerator, b, "Bob")
    v_b = _ellipsoid_volume(numerator, a, "Alice")
    return v_a, v_b, a, b


def qes_volume(rho: StateLike) -> QesData:
    v_a, v_b, a, b = qes_volume_arrays(rho)
    return QesData(v_a=float(v_a), v_b=float(v_b), bloch=BlochData(a=float(a), b=float(b)))


def _spectral_products(eig: Eigensystem):
    lam = np.clip(eig.eigenvalues, 0.0, None)
    j, k = _pairs(eig.dim)
    pair_sums = np.prod(lam[..., j] + lam[..., k], axis=-1)
    det = np.prod(lam, axis=-1)
    gaps = eig.eigenvalues[..., j] - eig.eigenvalues[..., k]
    return lam, pair_sums, det, gaps


def cross_weight(eig: Eigensystem, direction: CrossDirection) -> Number:
    """Bures->HS weight prod(l_j + l_k) sqrt(det rho), or its reciprocal for HS->Bures."""
    lam, pair_sums, det, _ = _spectral_products(eig)
    forward = pair_sums * np.sqrt(det)
    if CrossDirection(direction) == CrossDirection.BURES_TO_HS:
        return _out(forward)
    with np.errstate(divide="ignore", over="ignore"):
        reciprocal = 1.0 / forward
    return _out(np.where(np.any(lam < HS_TO_BURES_MIN_EIGENVALUE, axis=-1), np.inf, reciprocal))


def qes_eig_weight(v_a: Number, eig: Eigensystem, ensemble: Union[EnsembleKind, EnsembleName]) -> Number:
    """V_A over the eigenvalue part of the sampling measure's volume element."""
    kind = ensemble.kind if isinstance(ensemble, EnsembleKind) else EnsembleName(ensemble)
    _, pair_sums, det, gaps = _spectral_products(eig)
    vandermonde = np.prod(gaps**2, axis=-1)
    numerator = np.asarray(v_a, dtype=float)
    if kind == EnsembleName.BURES:
        numerator = numerator * np.sqrt(det) * pair_sums
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        weight = numerator / vandermonde
    degenerate = np.any(np.abs(gaps) < EIGEN_GAP_TOL, axis=-1)
    return _out(np.where(degenerate, np.inf, weight))


def qes_unitary_weight(v_a: Number, eig: Eigensystem) -> Number:
    """Eigenvalue-adjusted weight extended by |prod Re(U^dagger)_jk Im(U^dagger)_jk| over j<k."""
    _, _, _, gaps = _spectral_products(eig)
    j, k = _pairs(eig.dim)
    upper = dagger(eig.unitary)[..., j, k]
    gap_factors = gaps**2
    re, im = upper.real, upper.imag
    tiny = (
        np.any(gap_factors < UNITARY_FACTOR_TOL, axis=-1)
        | np.any(np.abs(re) < UNITARY_FACTOR_TOL, axis=-1)
        | np.any(np.abs(im) < UNITARY_FACTOR_TOL, axis=-1)
    )
    denominator = np.prod(gap_factors, axis=-1) * np.abs(np.prod(re * im, axis=-1))
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        weight = np.asarray(v_a, dtype=float) / denominator
    return _out(np.where(tiny, np.inf, weight))


def qes_raw_weight(v_a: Number) -> Number:
    return v_a


def scheme_weights(
    scheme: WeightScheme,
    ensemble: EnsembleKind,
    count: int,
    volume: Optional[np.ndarray] = None,
    eig: Optional[Eigensystem] = None,
) -> np.ndarray:
    """Per-sample weights for a block of ``count`` states under ``scheme``."""
    scheme.check_ensemble(ensemble.kind)
    name = scheme.scheme
    if name == WeightSchemeName.NONE:
        return np.ones(count)
    if name == WeightSchemeName.QES_RAW:
        return np.asarray(qes_raw_weight(volume), dtype=float)
    if name == WeightSchemeName.CROSS:
        return np.asarray(cross_weight(eig, scheme.cross_direction(ensemble.kind)), dtype=float)
    if name == WeightSchemeName.QES_EIG:
        return np.asarray(qes_eig_weight(volume, eig, ensemble), dtype=float)
    return np.asarray(qes_unitary_weight(volume, eig), dtype=float)

