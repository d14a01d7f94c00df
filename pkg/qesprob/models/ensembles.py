from pydantic import BaseModel, ConfigDict, Field, model_validator

from .base import EnsembleName, FieldTag

UINT64_MAX = 2**64 - 1


class SeedSpec(BaseModel):
    """Master seed plus chunk index; maps injectively to one random stream"""
    model_config = ConfigDict(frozen=True)

    master_seed: int = Field(ge=0, le=UINT64_MAX)
    chunk_index: int = Field(0, ge=0, le=UINT64_MAX)


class EnsembleKind(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: EnsembleName = EnsembleName.HILBERT_SCHMIDT
    field: FieldTag = FieldTag.COMPLEX
    dim: int = Field(4, ge=2, le=8)

    @model_validator(mode="after")
    def _bures_is_complex(self):
        if self.kind == EnsembleName.BURES and self.field == FieldTag.REAL:
            raise ValueError("Bures sampling is defined for the complex field only")
        return self

    @property
    def is_hilbert_schmidt(self) -> bool:
        return self.kind == EnsembleName.HILBERT_SCHMIDT
