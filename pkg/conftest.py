import math

import numpy as np
import pytest

from qesprob.models import EnsembleKind, EnsembleName, FieldTag, SeedSpec
from qesprob.services.ensembles import derive_stream, sample_states


@pytest.fixture
def bell():
    phi = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    return np.outer(phi, phi.conj())


@pytest.fixture
def maximally_mixed():
    return np.eye(4, dtype=complex) / 4


@pytest.fixture
def werner(bell):
    def build(w):
        return w * bell + (1 - w) * np.eye(4) / 4
    return build


@pytest.fixture
def hs_states():
    def draw(count, seed=11, chunk=0, field=FieldTag.COMPLEX):
        rng = derive_stream(SeedSpec(master_seed=seed, chunk_index=chunk))
        return sample_states(EnsembleKind(field=field), rng, count)
    return draw


@pytest.fixture
def bures_states():
    def draw(count, seed=11, chunk=0):
        rng = derive_stream(SeedSpec(master_seed=seed, chunk_index=chunk))
        return sample_states(EnsembleKind(kind=EnsembleName.BURES), rng, count)
    return draw


@pytest.fixture
def local_unitaries():
    """Random local unitaries U_A (x) U_B from phase-fixed QR of 2x2 Ginibre blocks"""
    def draw(rng, count):
        def haar2():
            q, r = np.linalg.qr(rng.standard_normal((count, 2, 2)) + 1j * rng.standard_normal((count, 2, 2)))
            d = np.diagonal(r, axis1=-2, axis2=-1)
            return q * (d / np.abs(d))[:, None, :]
        ua, ub = haar2(), haar2()
        return np.einsum("nij,nkl->nikjl", ua, ub).reshape(count, 4, 4)
    return draw
