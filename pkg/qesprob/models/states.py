import numpy as np
from pydantic import Field, model_validator

from .base import ComplexMatrix, FieldTag, NumericModel

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
REAL_TOL = 1e-12
PPT_TOL = 1e-12


def density_violations(matrices: np.ndarray, field: FieldTag = FieldTag.COMPLEX) -> np.ndarray:
    """Boolean mask over a stack: True where a density-matrix invariant fails."""
    m = np.asarray(matrices, dtype=complex)
    herm = np.abs(m - np.swapaxes(m.conj(), -1, -2)).max(axis=(-2, -1)) > HERMITIAN_TOL
    trace = np.abs(np.trace(m, axis1=-2, axis2=-1) - 1.0) > TRACE_TOL
    # eigvalsh reads one triangle only; hermiticity is checked separately above
    psd = np.linalg.eigvalsh(m)[..., 0] < -PSD_TOL
    bad = herm | trace | psd
    if field == FieldTag.REAL:
        bad |= np.abs(m.imag).max(axis=(-2, -1)) >= REAL_TOL
    return bad


class DensityMatrix(NumericModel):
    """Hermitian, unit-trace, positive-semidefinite state"""
    matrix: ComplexMatrix
    field: FieldTag = FieldTag.COMPLEX

    @model_validator(mode="after")
    def _check_invariants(self):
        if self.matrix.ndim != 2:
            raise ValueError("DensityMatrix holds a single matrix; use arrays for stacks")
        if density_violations(self.matrix, self.field):
            raise ValueError("matrix is not a valid density matrix")
        return self

    @property
    def dim(self) -> int:
        return self.matrix.shape[-1]


class BlochData(NumericModel):
    """Norms of Alice's (a) and Bob's (b) Bloch vectors"""
    a: float = Field(ge=0, le=1 + 1e-10)
    b: float = Field(ge=0, le=1 + 1e-10)


class SeparabilityVerdict(NumericModel):
    """PPT verdict for a two-qubit state"""
    separable: bool
    min_pt_eigenvalue: float
    det_pt: float

    @model_validator(mode="after")
    def _consistent(self):
        if self.separable != (self.min_pt_eigenvalue >= -PPT_TOL):
            raise ValueError("separable flag disagrees with the minimum PT eigenvalue")
        return self
