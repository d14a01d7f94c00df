"""Closed-form and invariant checks run by ``qesprob selftest``."""

import logging
import math
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from ..models.base import CrossDirection, EnsembleName
from ..models.ensembles import EnsembleKind, SeedSpec
from ..models.estimator import ENTANGLEMENT_THRESHOLD, EstimatorAccumulator
from ..models.weights import BLOCH_BALL_VOLUME
from .ensembles import derive_stream, sample_states
from .estimator import accumulate_many, merge
from .numeric_kernel import determinant, hermitian_eigensystem
from .qes_weights import cross_weight, qes_volume
from .states import partial_transpose_b

logger = logging.getLogger(__name__)

SELFTEST_SEED = 20201105
PPT_SAMPLES = 100_000
EXACT_TOL = 1e-10


def bell_state() -> np.ndarray:
    phi = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    return np.outer(phi, phi.conj())


def werner_state(w: float) -> np.ndarray:
    return w * bell_state() + (1 - w) * np.eye(4) / 4


class SelfTester:
    """Runs each named check and records a pass/fail row for the report table"""

    def __init__(self, ppt_samples: int = PPT_SAMPLES, seed: int = SELFTEST_SEED):
        self.ppt_samples = ppt_samples
        self.seed = seed
        self.test_results: List[Dict[str, Any]] = []

    def log_test(self, test_name: str, success: bool, message: str) -> None:
        self.test_results.append({"test": test_name, "success": success, "message": message})
        status = "✅ PASS" if success else "❌ FAIL"
        print(f"{status} {test_name:<34} {message}")

    def _check(self, test_name: str, check: Callable[[], Tuple[bool, str]]) -> None:
        try:
            success, message = check()
        except Exception as e:
            logger.exception(f"❌ {test_name} raised")
            success, message = False, f"error: {e}"
        self.log_test(test_name, success, message)

    def check_bell_volume(self):
        ratio = qes_volume(bell_state()).v_a / BLOCH_BALL_VOLUME
        return abs(ratio - 1) < EXACT_TOL, f"v_a/(4pi/3) = {ratio!r}"

    def check_werner_volume(self):
        ratio = qes_volume(werner_state(1 / 3)).v_a / ENTANGLEMENT_THRESHOLD
        return abs(ratio - 1) < EXACT_TOL, f"v_a/(4pi/81) = {ratio!r}"

    def check_maximally_mixed_volume(self):
        v_a = qes_volume(np.eye(4) / 4).v_a
        return v_a == 0.0, f"v_a = {v_a!r}"

    def check_partial_transpose_involution(self):
        rng = derive_stream(SeedSpec(master_seed=self.seed, chunk_index=0))
        states = sample_states(EnsembleKind(), rng, 1000)
        same = np.array_equal(partial_transpose_b(partial_transpose_b(states)), states)
        return same, "bitwise on 1000 HS states"

    def check_weight_reciprocity(self):
        rng = derive_stream(SeedSpec(master_seed=self.seed, chunk_index=1))
        eig = hermitian_eigensystem(sample_states(EnsembleKind(), rng, 1000))
        product = cross_weight(eig, CrossDirection.BURES_TO_HS) * cross_weight(eig, CrossDirection.HS_TO_BURES)
        worst = float(np.abs(product - 1).max())
        return worst < EXACT_TOL, f"max |w(B->HS) w(HS->B) - 1| = {worst:.2e}"

    def check_ppt_determinant_equivalence(self):
        counterexamples = 0
        for index, kind in enumerate(EnsembleName):
            rng = derive_stream(SeedSpec(master_seed=self.seed, chunk_index=10 + index))
            pt = partial_transpose_b(sample_states(EnsembleKind(kind=kind), rng, self.ppt_samples))
            min_eig = np.linalg.eigvalsh(pt)[:, 0]
            det_pt = determinant(pt).real
            decisive = np.abs(min_eig) > EXACT_TOL
            counterexamples += int(((min_eig >= 0) != (det_pt >= 0))[decisive].sum())
        return counterexamples == 0, f"{counterexamples} counterexamples in {2 * self.ppt_samples} states"

    def check_merge_associativity(self):
        rng = np.random.default_rng(self.seed)
        weights = rng.exponential(size=10_000)
        separable = rng.random(10_000) < 0.25
        volumes = rng.random(10_000) * BLOCH_BALL_VOLUME
        empty = EstimatorAccumulator(batch_size=2_000)
        whole = accumulate_many(empty, weights, separable, volumes)
        halves = merge(
            accumulate_many(empty, weights[:5000], separable[:5000], volumes[:5000]),
            accumulate_many(empty, weights[5000:], separable[5000:], volumes[5000:]),
        )
        counts = (whole.n_total, whole.n_sep, whole.n_above_threshold) == (
            halves.n_total, halves.n_sep, halves.n_above_threshold,
        )
        rel = abs(whole.sum_w_sep - halves.sum_w_sep) / whole.sum_w_sep
        return counts and rel < 1e-12, f"relative sum difference {rel:.2e}"

    def check_seed_determinism(self):
        stream_seed = SeedSpec(master_seed=self.seed, chunk_index=7)
        first = sample_states(EnsembleKind(kind=EnsembleName.BURES), derive_stream(stream_seed), 100)
        second = sample_states(EnsembleKind(kind=EnsembleName.BURES), derive_stream(stream_seed), 100)
        return np.array_equal(first, second), "same SeedSpec -> identical Bures states"

    def run_all(self) -> bool:
        checks = [
            ("Bell state volume", self.check_bell_volume),
            ("Werner w=1/3 volume", self.check_werner_volume),
            ("Maximally mixed volume", self.check_maximally_mixed_volume),
            ("Partial transpose involution", self.check_partial_transpose_involution),
            ("Cross weight reciprocity", self.check_weight_reciprocity),
            ("PPT det/eigenvalue equivalence", self.check_ppt_determinant_equivalence),
            ("Merge associativity", self.check_merge_associativity),
            ("Seed determinism", self.check_seed_determinism),
        ]
        for name, check in checks:
            self._check(name, check)
        return all(result["success"] for result in self.test_results)

    @property
    def failed(self) -> List[str]:
        return [r["test"] for r in self.test_results if not r["success"]]


def run_selftest() -> SelfTester:
    """Run every check and return the tester holding the per-check results"""
    tester = SelfTester()
    tester.run_all()
    return tester
