from pydantic import model_validator

from .base import ComplexMatrix, NumericModel, RealVector


class Eigensystem(NumericModel):
    """Descending eigenvalues and phase-normalized eigenvector unitary.

    Batched form: eigenvalues of shape (..., n) with unitary (..., n, n).
    """
    eigenvalues: RealVector
    unitary: ComplexMatrix

    @model_validator(mode="after")
    def _shapes_agree(self):
        if self.unitary.shape[:-1] != self.eigenvalues.shape:
            raise ValueError(
                f"eigenvalues {self.eigenvalues.shape} do not match unitary {self.unitary.shape}"
            )
        return self

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[-1]
