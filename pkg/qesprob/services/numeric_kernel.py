"""Dense complex linear algebra shared by the samplers and the weights.

Every function accepts a single ``(n, n)`` matrix or a stack ``(..., n, n)``
and works element-wise over the leading axes.
"""

import logging

import numpy as np

from ..exceptions import ConvergenceFailure, NotHermitian, RankDeficient
from ..models.kernel import Eigensystem
from ..models.states import HERMITIAN_TOL

logger = logging.getLogger(__name__)

QR_RANK_TOL = 1e-14


def dagger(m: np.ndarray) -> np.ndarray:
    return np.swapaxes(np.conj(m), -1, -2)


def normalize_column_phases(u: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real and nonnegative.

    Ties go to the first (lowest-row) entry.
    """
    u = np.asarray(u, dtype=complex)
    pivot_rows = np.argmax(np.abs(u), axis=-2)[..., None, :]
    pivots = np.take_along_axis(u, pivot_rows, axis=-2)
    moduli = np.abs(pivots)
    phases = np.where(moduli > 0, pivots / np.where(moduli > 0, moduli, 1.0), 1.0)
    out = u / phases
    # the pivot is real up to rounding; make it exact
    np.put_along_axis(out, pivot_rows, np.abs(np.take_along_axis(out, pivot_rows, axis=-2)), axis=-2)
    return out


def hermitian_eigensystem(m: np.ndarray) -> Eigensystem:
    """Descending eigenvalues and phase-normalized eigenvectors of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    deviation = np.abs(m - dagger(m)).max()
    if deviation > HERMITIAN_TOL:
        raise NotHermitian(f"max |m - m^dagger| = {deviation:.3e} exceeds {HERMITIAN_TOL}")

    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as e:
        logger.error(f"❌ Eigen-solver failed: {e}")
        raise ConvergenceFailure(str(e)) from e

    order = np.argsort(-values, axis=-1, kind="stable")
    values = np.take_along_axis(values, order, axis=-1)
    vectors = np.take_along_axis(vectors, order[..., None, :], axis=-1)
    return Eigensystem(eigenvalues=values, unitary=normalize_column_phases(vectors))


def determinant(m: np.ndarray):
    """LU (partial pivoting) determinant; complex, or an array of them for stacks."""
    return np.linalg.det(np.asarray(m, dtype=complex))


def unitary_from_qr(m: np.ndarray) -> np.ndarray:
    """Q factor of m with phases fixed so that R has a positive real diagonal.

    For Ginibre input the result is Haar-distributed.
    """
    q, r = np.linalg.qr(np.asarray(m, dtype=complex))
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    smallest = np.abs(diag).min()
    if smallest < QR_RANK_TOL:
        raise RankDeficient(f"|r_jj| = {smallest:.3e} below {QR_RANK_TOL}")
    return q * (diag / np.abs(diag))[..., None, :]
