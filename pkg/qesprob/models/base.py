from enum import Enum
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer


# Base enums
class FieldTag(str, Enum):
    COMPLEX = "complex"
    REAL = "real"


class EnsembleName(str, Enum):
    HILBERT_SCHMIDT = "hilbert_schmidt"
    BURES = "bures"


class WeightSchemeName(str, Enum):
    NONE = "none"
    QES_RAW = "qes_raw"
    CROSS = "cross"
    QES_EIG = "qes_eig"
    QES_UNITARY = "qes_unitary"


class CrossDirection(str, Enum):
    BURES_TO_HS = "bures_to_hs"
    HS_TO_BURES = "hs_to_bures"


class Party(str, Enum):
    ALICE = "alice"
    BOB = "bob"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    BOTH = "both"


def _as_complex_array(value: Any) -> np.ndarray:
    arr = np.asarray(value, dtype=complex)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise ValueError(f"expected a square matrix (or stack), got shape {arr.shape}")
    return arr


def _as_real_array(value: Any) -> np.ndarray:
    arr = np.asarray(value)
    if np.iscomplexobj(arr):
        raise ValueError("expected real values")
    return arr.astype(float)


# ComplexMatrix: dim x dim complex entries; stacks (..., dim, dim) are accepted
# wherever the kernel is vectorised.
ComplexMatrix = Annotated[
    np.ndarray,
    BeforeValidator(_as_complex_array),
    PlainSerializer(lambda m: {"real": np.real(m).tolist(), "imag": np.imag(m).tolist()}),
]

RealVector = Annotated[
    np.ndarray,
    BeforeValidator(_as_real_array),
    PlainSerializer(lambda v: np.asarray(v).tolist()),
]


class NumericModel(BaseModel):
    """Base model for types carrying numpy arrays"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
