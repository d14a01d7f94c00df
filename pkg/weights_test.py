"""
Steering-ellipsoid volume and importance-weight tests
"""

import math

import numpy as np
import pytest

from qesprob.models import (
    BLOCH_BALL_VOLUME,
    ENTANGLEMENT_THRESHOLD,
    CrossDirection,
    Eigensystem,
    EnsembleKind,
    EnsembleName,
    WeightScheme,
    WeightSchemeName,
)
from qesprob.services.numeric_kernel import hermitian_eigensystem, normalize_column_phases
from qesprob.services.qes_weights import (
    cross_weight,
    qes_eig_weight,
    qes_raw_weight,
    qes_unitary_weight,
    qes_volume,
    qes_volume_arrays,
    scheme_weights,
)
from qesprob.services.states import separable_mask


def diagonal_eigensystem(values):
    return Eigensystem(eigenvalues=np.array(values, dtype=float), unitary=np.eye(len(values)))


class TestQesVolume:
    def test_maximally_mixed(self, maximally_mixed):
        data = qes_volume(maximally_mixed)
        assert (data.v_a, data.v_b) == (0.0, 0.0)

    def test_bell_fills_bloch_ball(self, bell):
        data = qes_volume(bell)
        assert data.v_a / BLOCH_BALL_VOLUME == pytest.approx(1.0, abs=1e-10)
        assert data.v_b / BLOCH_BALL_VOLUME == pytest.approx(1.0, abs=1e-10)

    def test_werner_threshold_volume(self, werner):
        """Werner state at w=1/3 has V_A = 4 pi/81"""
        data = qes_volume(werner(1 / 3))
        assert data.v_a / ENTANGLEMENT_THRESHOLD == pytest.approx(1.0, abs=1e-10)

    def test_pure_product_limit(self):
        """Pure product state: both Bloch norms 1, volumes taken as 0"""
        zero = np.array([[1, 0], [0, 0]], dtype=complex)
        data = qes_volume(np.kron(zero, zero))
        assert (data.v_a, data.v_b) == (0.0, 0.0)

    def test_sampled_volume_bounds_and_relation(self, hs_states, bures_states):
        """0 <= V <= 4pi/3 and V_B (1-a^2)^2 = V_A (1-b^2)^2"""
        for states in (hs_states(50_000, chunk=5), bures_states(50_000, chunk=6)):
            v_a, v_b, a, b = qes_volume_arrays(states)
            assert np.all(v_a >= 0) and np.all(v_a <= BLOCH_BALL_VOLUME + 1e-9)
            assert np.mean(v_a > BLOCH_BALL_VOLUME - 1e-9) < 1e-3
            lhs, rhs = v_b * (1 - a**2) ** 2, v_a * (1 - b**2) ** 2
            assert np.allclose(lhs, rhs, rtol=1e-8, atol=0)

    def test_large_volume_certifies_entanglement(self, hs_states, bures_states):
        """No separable state has V_A above 4pi/81"""
        for states in (hs_states(100_000, chunk=7), bures_states(100_000, chunk=8)):
            v_a, _, _, _ = qes_volume_arrays(states)
            separable = separable_mask(states)
            assert not np.any(separable & (v_a > ENTANGLEMENT_THRESHOLD + 1e-12))


class TestCrossWeight:
    def test_equal_eigenvalues(self):
        """(1/2)^6 * sqrt(1/256) = 1/1024"""
        eig = diagonal_eigensystem([0.25] * 4)
        assert cross_weight(eig, CrossDirection.BURES_TO_HS) == pytest.approx(1 / 1024)

    def test_pure_state(self):
        eig = diagonal_eigensystem([1.0, 0.0, 0.0, 0.0])
        assert cross_weight(eig, CrossDirection.BURES_TO_HS) == 0.0
        assert math.isinf(cross_weight(eig, CrossDirection.HS_TO_BURES))

    def test_small_negative_eigenvalue_clamped(self):
        eig = diagonal_eigensystem([0.6, 0.3, 0.1, -1e-11])
        assert cross_weight(eig, CrossDirection.BURES_TO_HS) == 0.0

    def test_reciprocity(self, hs_states):
        eig = hermitian_eigensystem(hs_states(10_000, chunk=9))
        product = cross_weight(eig, CrossDirection.BURES_TO_HS) * cross_weight(eig, CrossDirection.HS_TO_BURES)
        assert np.allclose(product, 1.0, rtol=1e-10, atol=0)


class TestQesEigWeight:
    def test_degenerate_spectrum_flagged(self, maximally_mixed):
        """Maximally mixed: zero volume but degenerate spectrum, so the weight is non-finite"""
        eig = hermitian_eigensystem(maximally_mixed)
        assert math.isinf(qes_eig_weight(qes_volume(maximally_mixed).v_a, eig, EnsembleName.HILBERT_SCHMIDT))

    def test_hand_computed_gaps(self):
        """Gap product 0.1*0.2*0.3*0.1*0.2*0.1 = 1.2e-5, squared 1.44e-10"""
        eig = diagonal_eigensystem([0.4, 0.3, 0.2, 0.1])
        weight = qes_eig_weight(1.0, eig, EnsembleKind())
        assert weight == pytest.approx(1 / 1.44e-10, rel=1e-9)

    def test_bures_is_hs_times_cross(self, bures_states):
        """Bures-side weight = HS-side weight x Bures->HS cross weight"""
        states = bures_states(2000, chunk=10)
        v_a, _, _, _ = qes_volume_arrays(states)
        eig = hermitian_eigensystem(states)
        bures = qes_eig_weight(v_a, eig, EnsembleName.BURES)
        hs = qes_eig_weight(v_a, eig, EnsembleName.HILBERT_SCHMIDT)
        assert np.allclose(bures, hs * cross_weight(eig, CrossDirection.BURES_TO_HS), rtol=1e-10, atol=0)


class TestQesUnitaryWeight:
    def test_diagonal_state_flagged(self):
        """Identity eigenvectors zero every off-diagonal U^dagger entry"""
        assert math.isinf(qes_unitary_weight(1.0, diagonal_eigensystem([0.4, 0.3, 0.2, 0.1])))

    def test_column_sign_invariance(self, hs_states):
        eig = hermitian_eigensystem(hs_states(1, chunk=11)[0])
        flipped = eig.unitary.copy()
        flipped[:, 1] *= -1
        renormalized = Eigensystem(eigenvalues=eig.eigenvalues, unitary=normalize_column_phases(flipped))
        assert qes_unitary_weight(0.5, renormalized) == pytest.approx(qes_unitary_weight(0.5, eig), rel=1e-12)

    def test_nonnegative_or_flagged(self, hs_states):
        states = hs_states(5000, chunk=12)
        v_a, _, _, _ = qes_volume_arrays(states)
        weights = qes_unitary_weight(v_a, hermitian_eigensystem(states))
        assert np.all((weights >= 0) | np.isinf(weights))

    def test_exclusion_follows_pivot_below_diagonal(self, hs_states):
        """A column whose largest entry sits below the diagonal makes its U^dagger factor real"""
        states = hs_states(20_000, chunk=14)
        v_a, _, _, _ = qes_volume_arrays(states)
        eig = hermitian_eigensystem(states)
        excluded = np.isinf(qes_unitary_weight(v_a, eig))
        pivot_below = np.any(np.argmax(np.abs(eig.unitary), axis=-2) > np.arange(4), axis=-1)
        assert np.all(excluded[pivot_below])
        assert np.mean(excluded & ~pivot_below) < 1e-3
        assert 0.91 <= excluded.mean() <= 0.97


class TestSchemeWeights:
    def test_raw_weight_is_volume(self, bell):
        assert qes_raw_weight(0.0) == 0.0
        assert qes_raw_weight(qes_volume(bell).v_a) == pytest.approx(BLOCH_BALL_VOLUME)

    def test_every_scheme_nonnegative(self, hs_states):
        states = hs_states(5000, chunk=13)
        v_a, _, _, _ = qes_volume_arrays(states)
        eig = hermitian_eigensystem(states)
        for name in WeightSchemeName:
            weights = scheme_weights(WeightScheme(scheme=name), EnsembleKind(), len(states), v_a, eig)
            assert weights.shape == (len(states),)
            assert np.all((weights >= 0) | np.isinf(weights))

    def test_unitary_scheme_rejects_bures(self):
        with pytest.raises(ValueError):
            scheme_weights(
                WeightScheme(scheme=WeightSchemeName.QES_UNITARY),
                EnsembleKind(kind=EnsembleName.BURES), 1, np.zeros(1), diagonal_eigensystem([0.4, 0.3, 0.2, 0.1]),
            )

    def test_cross_direction_follows_ensemble(self):
        scheme = WeightScheme(scheme=WeightSchemeName.CROSS)
        assert scheme.cross_direction(EnsembleName.BURES) == CrossDirection.BURES_TO_HS
        assert scheme.cross_direction(EnsembleName.HILBERT_SCHMIDT) == CrossDirection.HS_TO_BURES
