"""Two-qubit state operations: partial transpose, reduced states, PPT test.

Qubit ordering: row/column index = 2 * (Alice basis) + (Bob basis), so the
four 2x2 blocks of a 4x4 matrix are indexed by Alice.
"""

import logging
from typing import Union

import numpy as np

from ..exceptions import DimensionMismatch, InvalidState
from ..models.base import FieldTag
from ..models.states import PPT_TOL, BlochData, DensityMatrix, SeparabilityVerdict, density_violations
from .numeric_kernel import determinant

logger = logging.getLogger(__name__)

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

StateLike = Union[DensityMatrix, np.ndarray]


def two_qubit_matrix(rho: StateLike) -> np.ndarray:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape[-2:] != (4, 4):
        raise DimensionMismatch(f"two-qubit operation needs 4x4 input, got {m.shape[-2:]}")
    return m


def partial_transpose_b(rho: StateLike) -> np.ndarray:
    """Transpose each of the four 2x2 blocks in place (transpose on Bob's qubit)."""
    m = two_qubit_matrix(rho)
    lead = m.shape[:-2]
    blocks = m.reshape(*lead, 2, 2, 2, 2)  # [alice_row, bob_row, alice_col, bob_col]
    return np.swapaxes(blocks, -3, -1).reshape(*lead, 4, 4)


def partial_trace_b(rho: StateLike) -> np.ndarray:
    m = two_qubit_matrix(rho)
    return np.einsum("...ikjk->...ij", m.reshape(*m.shape[:-2], 2, 2, 2, 2))


def partial_trace_a(rho: StateLike) -> np.ndarray:
    m = two_qubit_matrix(rho)
    return np.einsum("...ikil->...kl", m.reshape(*m.shape[:-2], 2, 2, 2, 2))


def bloch_vector(qubit: np.ndarray) -> np.ndarray:
    """(Tr rho sx, Tr rho sy, Tr rho sz) for a 2x2 state or stack."""
    return np.einsum("...ij,kji->...k", qubit, PAULI).real


def bloch_norm_arrays(rho: StateLike):
    a = np.linalg.norm(bloch_vector(partial_trace_b(rho)), axis=-1)
    b = np.linalg.norm(bloch_vector(partial_trace_a(rho)), axis=-1)
    return a, b


def bloch_norms(rho: StateLike) -> BlochData:
    a, b = bloch_norm_arrays(rho)
    return BlochData(a=float(a), b=float(b))


def min_pt_eigenvalues(rho: StateLike) -> np.ndarray:
    return np.linalg.eigvalsh(partial_transpose_b(rho))[..., 0]


def separable_mask(rho: StateLike) -> np.ndarray:
    return min_pt_eigenvalues(rho) >= -PPT_TOL


def separability_verdict(rho: StateLike) -> SeparabilityVerdict:
    """PPT verdict; for 2x2 systems PPT is necessary and sufficient for separability."""
    pt = partial_transpose_b(rho)
    min_eig = float(np.linalg.eigvalsh(pt)[0])
    return SeparabilityVerdict(
        separable=min_eig >= -PPT_TOL,
        min_pt_eigenvalue=min_eig,
        det_pt=float(determinant(pt).real),
    )


def purity(rho: StateLike):
    """Tr(rho^2); float for one state, array for a stack."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    value = np.einsum("...ij,...ji->...", m, m).real
    return float(value) if np.ndim(value) == 0 else value


def validate_states(matrices: np.ndarray, field: FieldTag = FieldTag.COMPLEX, every: int = 1) -> None:
    """Check density-matrix invariants on every ``every``-th state of a stack."""
    picked = np.asarray(matrices)[::every]
    bad = density_violations(picked, field)
    if np.any(bad):
        first = int(np.argmax(bad)) * every
        logger.error(f"❌ {int(bad.sum())} sampled states failed the invariants (first at {first})")
        raise InvalidState(f"state {first} is not a valid density matrix")
