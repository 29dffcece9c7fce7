"""Redistribution rates and per-message compression budgets."""

import math

import numpy as np
import pytest

from qiclab import (
    ALICE,
    BOB,
    REFERENCE,
    RegisterSystem,
    StateVector,
    classical_state,
    compression_budget,
    message_dims,
    protocol_step_rates,
    qic,
    qic_terms,
    redist_rates,
    tensor,
)
from qiclab.fuzz import random_input_density, random_protocol, random_state_vector

from test_protocol import correlated_bit_protocol


class TestRedistRates:
    def test_uncorrelated_block_is_free(self):
        block = random_state_vector([("C", 2, ALICE)], 0)
        rest = random_state_vector(
            [("A", 2, ALICE), ("B", 2, BOB), ("R", 2, REFERENCE)], 1
        )
        st = tensor(block, rest)
        rep = redist_rates(st, a=["A"], b=["B"], c=["C"], r=["R"])
        assert abs(rep.q_min) < 1e-10

    def test_three_party_chain_rate(self):
        # oracle: H(CB) = 1, H(RB) = 1, H(B) = 1, H(CRB) = 0 for the chain
        # state, so I(C;R|B) = 1 and the rate is 1/2.
        amps = np.zeros(8, dtype=complex)
        amps[0] = amps[7] = 1 / math.sqrt(2)
        st = StateVector(
            RegisterSystem.make([("C", 2, ALICE), ("B", 2, BOB), ("R", 2, REFERENCE)]),
            amps,
        )
        rep = redist_rates(st, a=[], b=["B"], c=["C"], r=["R"])
        assert abs(rep.q_min - 0.5) < 1e-12

    def test_entangled_pair_generates_one_ebit(self):
        amps = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
        st = StateVector(
            RegisterSystem.make([("C", 2, ALICE), ("A", 2, ALICE)]), amps
        )
        rep = redist_rates(st, a=["A"], b=[], c=["C"], r=[])
        assert abs(rep.e_net - 1.0) < 1e-12

    def test_groups_must_partition(self):
        st = random_state_vector([("A", 2, ALICE), ("B", 2, BOB)], 2)
        with pytest.raises(ValueError, match="partition"):
            redist_rates(st, a=["A"], b=["B"], c=["A"], r=[])

    def test_requires_pure_state(self):
        from qiclab.fuzz import random_density_operator

        rho = random_density_operator([("A", 2, ALICE), ("B", 2, BOB)], 3)
        with pytest.raises(ValueError, match="pure"):
            redist_rates(rho, a=["A"], b=["B"], c=[], r=[])


class TestCompressionBudget:
    def test_pure_input_costs_only_the_overhead(self):
        p = random_protocol(4, 2)
        vec = random_state_vector(
            [(r.name, r.dim, ALICE) for r in p.alice_in]
            + [(r.name, r.dim, BOB) for r in p.bob_in],
            5,
        )
        rep = compression_budget(p, vec, 0.02)
        for m in rep.per_message:
            assert abs(m.q - 0.02 / 4) < 1e-9
        assert abs(rep.total_rate - 0.02) < 1e-9

    def test_correlated_bit_budget(self):
        p = correlated_bit_protocol()
        rho = classical_state(
            np.array([[0.5], [0.5]]), [("A_in", 2, ALICE), ("B_in", 1, BOB)]
        )
        rep = compression_budget(p, rho, 0.01)
        assert abs(rep.total_rate - 1.01) < 1e-8

    def test_total_is_cost_plus_delta(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            m = 2 if rng.random() < 0.5 else 4
            p = random_protocol(rng, m)
            rho = random_input_density(p, rng)
            delta = float(rng.uniform(0.001, 0.2))
            rep = compression_budget(p, rho, delta)
            assert abs(rep.total_rate - qic(p, rho) - delta) < 1e-8

    def test_entanglement_rates_within_message_capacity(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            p = random_protocol(rng, 4)
            rho = random_input_density(p, rng)
            reports = protocol_step_rates(p, rho)
            for rep, d in zip(reports, message_dims(p)):
                cap = math.log2(d) if d > 1 else 0.0
                assert -cap - 1e-9 <= rep.e_net <= cap + 1e-9

    def test_step_rates_reproduce_cost_terms(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            p = random_protocol(rng, 2)
            rho = random_input_density(p, rng)
            terms = qic_terms(p, rho)
            reports = protocol_step_rates(p, rho)
            for t, rep in zip(terms, reports):
                assert abs(rep.q_min - t) < 1e-9

    def test_delta_must_be_positive(self):
        p = random_protocol(10, 2)
        rho = random_input_density(p, 11)
        with pytest.raises(ValueError, match="delta"):
            compression_budget(p, rho, 0.0)
