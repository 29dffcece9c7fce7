#!/usr/bin/env python3
"""Protocols, their communication cost, and their information cost.

Builds the smallest interesting protocol (Alice ships one classical bit
that is maximally correlated with the outside world), checks its costs by
hand, then fuzzes random protocols to watch the cost sandwich
0 <= information cost <= communication cost hold.
"""

import numpy as np

from qiclab import (
    ALICE,
    BOB,
    ProtocolSpec,
    Register,
    RegisterSystem,
    Stage,
    StateVector,
    UnitaryOp,
    classical_state,
    compression_budget,
    qcc,
    qic,
    qic_terms,
    run,
    validate,
)
from qiclab.fuzz import random_input_density, random_protocol

# --- one classical bit, shipped -----------------------------------------
empty = StateVector(RegisterSystem((), ()), np.array([1.0], dtype=complex))
u1 = UnitaryOp.rename((Register("A_in", 2),), (Register("C_1", 2),))
u2 = UnitaryOp(
    (Register("B_in", 1), Register("C_1", 2)),
    (Register("B_in", 1), Register("B_out", 2), Register("C_2", 1)),
    (
        Stage(np.eye(2), ("C_1",), (Register("B_out", 2),)),
        Stage(np.eye(1), (), (Register("C_2", 1),)),
    ),
)
u3 = UnitaryOp.rename((Register("C_2", 1),), (Register("A_fin", 1),))
ship_a_bit = ProtocolSpec(
    num_messages=2,
    preshared=empty,
    unitaries=(u1, u2, u3),
    alice_in=(Register("A_in", 2),),
    bob_in=(Register("B_in", 1),),
    messages=(("C_1",), ("C_2",)),
    alice_out=("A_fin",),
    bob_out=("B_out",),
    bob_scratch=("B_in",),
)
print("validation findings:", validate(ship_a_bit))

uniform_bit = classical_state(
    np.array([[0.5], [0.5]]), [("A_in", 2, ALICE), ("B_in", 1, BOB)]
)
print("communication cost =", qcc(ship_a_bit), "qubits")
print("information cost   =", qic(ship_a_bit, uniform_bit), "qubits")
print("per-message terms  =", qic_terms(ship_a_bit, uniform_bit))

traj = run(ship_a_bit, uniform_bit)
print("output registers:", traj.output.system.names)
print("output diagonal :", np.round(np.diag(traj.output.matrix).real, 3))

# the same protocol on a *pure* input is free: no outside correlations
pure_bit = StateVector(
    RegisterSystem.make([("A_in", 2, ALICE), ("B_in", 1, BOB)]),
    np.array([1, 1], dtype=complex) / np.sqrt(2),
)
print("information cost on a pure input =", qic(ship_a_bit, pure_bit))

# --- compressing a protocol: the per-message budget ----------------------
report = compression_budget(ship_a_bit, uniform_bit, delta=0.01)
print("budget with delta=0.01:")
for m in report.per_message:
    print(f"  message {m.index}: communication {m.q:.4f}, entanglement {m.f:.4f}")
print("  total:", report.total_rate, "(information cost + delta)")

# --- the sandwich over random protocols ----------------------------------
rng = np.random.default_rng(0)
print("cost sandwich over random protocols:")
for k in range(5):
    p = random_protocol(rng, 4)
    rho = random_input_density(p, rng)
    print(f"  protocol {k}: 0 <= {qic(p, rho):.4f} <= {qcc(p):.1f}")
