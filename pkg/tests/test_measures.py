"""Entropies, conditional mutual information and trace distance."""

import math

import numpy as np
import pytest

from qiclab import (
    ALICE,
    BOB,
    REFERENCE,
    DensityOperator,
    RegisterSystem,
    StateVector,
    classical_state,
    cond_entropy,
    cond_mutual_info,
    entropy,
    entropy_report,
    mutual_info,
    tensor,
    trace_distance,
)
from qiclab.fuzz import random_density_operator, random_state_vector


def ghz():
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[7] = 1 / math.sqrt(2)
    return StateVector(
        RegisterSystem.make([("A", 2, ALICE), ("B", 2, BOB), ("C", 2, REFERENCE)]), amps
    )


def bell():
    return StateVector(
        RegisterSystem.make([("A", 2, ALICE), ("B", 2, BOB)]),
        np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2),
    )


class TestEntropy:
    def test_pure_state_full_system_is_zero(self):
        st = random_state_vector([("a", 3, ALICE), ("b", 2, BOB)], 0)
        assert entropy(st) == 0.0

    def test_maximally_mixed(self):
        for d in (2, 3, 4):
            rho = DensityOperator(
                RegisterSystem.make([("a", d, ALICE)]), np.eye(d, dtype=complex) / d
            )
            assert abs(entropy(rho) - math.log2(d)) < 1e-12

    def test_binary_spectrum_value(self):
        # oracle: direct -sum p log2 p over the spectrum {1/4, 3/4}
        expected = -(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75))
        assert abs(expected - 0.8112781244591328) < 1e-12
        rho = DensityOperator(
            RegisterSystem.make([("a", 2, ALICE)]), np.diag([0.25, 0.75]).astype(complex)
        )
        assert abs(entropy(rho) - expected) < 1e-12

    def test_smaller_side_evaluation_agrees_with_reduction(self):
        rng = np.random.default_rng(5)
        st = random_state_vector([("a", 2, ALICE), ("b", 4, BOB), ("c", 3, BOB)], rng)
        from qiclab import reduced_density

        big = ["b", "c"]  # complement is smaller, so the dual route is used
        direct = entropy(reduced_density(st, big))
        assert abs(entropy(st, big) - direct) < 1e-10

    def test_report_bounds_and_floor(self):
        rep = entropy_report(ghz(), ["A", "B"])
        assert 0 <= rep.value <= math.log2(4) + 1e-12
        assert rep.spectrum_floor > 0
        assert rep.subsystem == ("A", "B")


class TestConditionalQuantities:
    def test_product_state_has_no_mutual_information(self):
        s1 = random_state_vector([("a", 2, ALICE), ("x", 2, REFERENCE)], 1)
        s2 = random_state_vector([("b", 2, BOB), ("y", 2, REFERENCE)], 2)
        st = tensor(s1, s2)
        assert abs(mutual_info(st, ["a"], ["b"])) < 1e-10
        assert abs(cond_mutual_info(st, ["a"], ["b"], ["x"])) < 1e-10

    def test_bell_mutual_information_is_two(self):
        assert abs(mutual_info(bell(), ["A"], ["B"]) - 2.0) < 1e-9

    def test_ghz_conditional_mutual_information(self):
        # oracle: entropy arithmetic on explicit reductions
        # H(AC) = H(BC) = H(C) = 1 (each reduction is an even classical mixture),
        # H(ABC) = 0 (pure), so I(A;B|C) = 1 + 1 - 1 - 0 = 1.
        st = ghz()
        probs_ac = np.diag(np.array([[0.5, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0.5]]))
        h_oracle = -sum(p * math.log2(p) for p in probs_ac if p > 0)
        assert h_oracle == 1.0
        assert abs(cond_mutual_info(st, ["A"], ["B"], ["C"]) - 1.0) < 1e-9

    def test_cond_entropy_of_entangled_pair_is_negative(self):
        assert abs(cond_entropy(bell(), ["A"], ["B"]) + 1.0) < 1e-9

    def test_overlapping_groups_rejected(self):
        with pytest.raises(ValueError, match="overlap"):
            cond_mutual_info(ghz(), ["A"], ["A"], ["C"])

    def test_empty_reference_group_gives_zero(self):
        st = random_state_vector([("a", 2, ALICE), ("b", 2, BOB)], 3)
        assert cond_mutual_info(st, ["a"], [], ["b"]) == 0.0

    def test_pure_and_density_routes_agree(self):
        from qiclab import reduced_density

        rng = np.random.default_rng(21)
        st = random_state_vector(
            [("a", 2, ALICE), ("b", 3, BOB), ("c", 2, BOB), ("e", 3, REFERENCE)], rng
        )
        rho = reduced_density(st, ["a", "b", "c"])
        lhs = cond_mutual_info(st, ["a"], ["b"], ["c"])
        rhs = cond_mutual_info(rho, ["a"], ["b"], ["c"])
        assert abs(lhs - rhs) < 1e-10


class TestTraceDistance:
    def test_identical_states(self):
        rho = random_density_operator([("a", 3, ALICE)], 4)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        a = classical_state(np.array([1.0, 0.0]), [("q", 2, ALICE)])
        b = classical_state(np.array([0.0, 1.0]), [("q", 2, ALICE)])
        assert abs(trace_distance(a, b) - 2.0) < 1e-12

    def test_basis_versus_diagonal_state(self):
        # oracle: eigenvalues of |0><0| - |+><+| are +/- sqrt(1/2)
        delta = np.diag([1.0, 0.0]) - np.full((2, 2), 0.5)
        eig = np.linalg.eigvalsh(delta)
        assert abs(sum(abs(e) for e in eig) - math.sqrt(2)) < 1e-12
        zero = StateVector(RegisterSystem.make([("q", 2, ALICE)]), np.array([1, 0], dtype=complex))
        plus = StateVector(
            RegisterSystem.make([("q", 2, ALICE)]), np.array([1, 1], dtype=complex) / math.sqrt(2)
        )
        assert abs(trace_distance(zero, plus) - math.sqrt(2)) < 1e-9

    def test_subsystem_reduction(self):
        st1 = bell()
        st2 = tensor(
            classical_state(np.array([1.0, 0.0]), [("A", 2, ALICE)]),
            classical_state(np.array([0.5, 0.5]), [("B", 2, BOB)]),
        )
        # both reduce to I/2 on B
        assert abs(trace_distance(st1, st2, ["B"])) < 1e-12

    def test_register_mismatch_rejected(self):
        a = classical_state(np.array([1.0, 0.0]), [("q", 2, ALICE)])
        b = classical_state(np.array([1.0, 0.0, 0.0]), [("q", 3, ALICE)])
        with pytest.raises(ValueError, match="mismatch"):
            trace_distance(a, b)


class TestInvalidSpectra:
    def test_negative_eigenvalue_beyond_tolerance_rejected(self):
        mat = np.diag([1.2, -0.2]).astype(complex)
        rho = DensityOperator._unchecked(RegisterSystem.make([("a", 2, ALICE)]), mat)
        with pytest.raises(Exception, match="invalid"):
            entropy(rho)
