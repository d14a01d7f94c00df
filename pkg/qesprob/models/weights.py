import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .base import CrossDirection, EnsembleName, WeightSchemeName
from .states import BlochData

BLOCH_BALL_VOLUME = 4 * math.pi / 3


class QesData(BaseModel):
    """Steering-ellipsoid volumes of both parties and the Bloch norms behind them"""
    model_config = ConfigDict(frozen=True)

    v_a: float = Field(ge=0, le=BLOCH_BALL_VOLUME + 1e-9)
    v_b: float = Field(ge=0, le=BLOCH_BALL_VOLUME + 1e-9)
    bloch: BlochData

    @model_validator(mode="after")
    def _volume_relation(self):
        da = (1 - self.bloch.a**2) ** 2
        db = (1 - self.bloch.b**2) ** 2
        if da > 1e-12 and db > 1e-12:
            lhs, rhs = self.v_b * da, self.v_a * db
            if abs(lhs - rhs) > 1e-8 * max(abs(lhs), abs(rhs), 1e-300):
                raise ValueError("V_B (1-a^2)^2 differs from V_A (1-b^2)^2")
        return self


class WeightScheme(BaseModel):
    model_config = ConfigDict(frozen=True)

    scheme: WeightSchemeName = WeightSchemeName.NONE

    def check_ensemble(self, ensemble: EnsembleName) -> None:
        if self.scheme == WeightSchemeName.QES_UNITARY and ensemble != EnsembleName.HILBERT_SCHMIDT:
            raise ValueError("qes_unitary weights apply to the hilbert_schmidt ensemble only")

    def cross_direction(self, ensemble: EnsembleName) -> CrossDirection:
        """Bures samples are reweighted towards HS and vice versa"""
        if ensemble == EnsembleName.BURES:
            return CrossDirection.BURES_TO_HS
        return CrossDirection.HS_TO_BURES

    @property
    def uses_eigensystem(self) -> bool:
        return self.scheme in (
            WeightSchemeName.CROSS, WeightSchemeName.QES_EIG, WeightSchemeName.QES_UNITARY
        )


class WeightedSample(BaseModel):
    """One estimator input; a non-finite weight marks the sample as excluded"""
    model_config = ConfigDict(frozen=True)

    weight: float = Field(ge=0)
    separable: bool
    v_a: float = Field(0.0, ge=0)
    purity: float = Field(0.0, ge=0)
