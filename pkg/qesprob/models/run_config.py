import os
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from .base import EnsembleName, FieldTag, OutputFormat, Party, WeightSchemeName
from .ensembles import UINT64_MAX, EnsembleKind
from .estimator import DEFAULT_BATCH_SIZE
from .weights import WeightScheme


class RunConfig(BaseModel):
    """Everything needed to reproduce one estimation run"""
    ensemble: EnsembleKind = Field(default_factory=EnsembleKind)
    weight: WeightScheme = Field(default_factory=WeightScheme)
    party: Party = Party.ALICE
    samples: int = Field(..., ge=1)
    batch_size: int = Field(DEFAULT_BATCH_SIZE, ge=1)
    master_seed: int = Field(0, ge=0, le=UINT64_MAX)
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    weight_cap: Optional[float] = Field(None, gt=0)
    output_format: OutputFormat = OutputFormat.BOTH
    output_path: str = "qesprob_run"

    block_size: int = Field(25_000, ge=1)
    validate_states: str = Field("sampled", pattern="^(all|sampled)$")

    @model_validator(mode="after")
    def _consistent(self):
        if self.samples < self.batch_size:
            raise ValueError(f"samples ({self.samples}) must be at least batch_size ({self.batch_size})")
        if self.weight.scheme == WeightSchemeName.QES_UNITARY and not self.ensemble.is_hilbert_schmidt:
            raise ValueError("qes-unitary weights require the hs ensemble")
        if self.ensemble.field == FieldTag.REAL and self.ensemble.kind != EnsembleName.HILBERT_SCHMIDT:
            raise ValueError("the real field requires the hs ensemble")
        if self.ensemble.dim != 4:
            raise ValueError("separability estimates need two-qubit (dim 4) states")
        return self

    @property
    def n_chunks(self) -> int:
        return -(-self.samples // self.batch_size)

    def chunk_sizes(self) -> list:
        sizes = [self.batch_size] * (self.n_chunks - 1)
        sizes.append(self.samples - self.batch_size * (self.n_chunks - 1))
        return sizes
