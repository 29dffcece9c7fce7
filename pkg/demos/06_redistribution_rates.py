#!/usr/bin/env python3
"""State redistribution rates, per message and single shot.

For a pure state split into sender side, moving block, receiver side and
reference, the achievable communication rate is half the conditional
mutual information between the block and the reference given the
receiver side. Applied to each message of a protocol this reproduces the
protocol's information cost term by term.
"""

import math

import numpy as np

from qiclab import (
    ALICE,
    BOB,
    REFERENCE,
    RegisterSystem,
    StateVector,
    message_dims,
    protocol_step_rates,
    qic_terms,
    redist_rates,
)
from qiclab.fuzz import random_input_density, random_protocol

# --- single-shot rates on a three-party chain ----------------------------
amps = np.zeros(8, dtype=complex)
amps[0] = amps[7] = 1 / math.sqrt(2)
chain = StateVector(
    RegisterSystem.make([("C", 2, ALICE), ("B", 2, BOB), ("R", 2, REFERENCE)]), amps
)
rep = redist_rates(chain, a=[], b=["B"], c=["C"], r=["R"])
print("moving C of a three-party chain to Bob:")
print("  communication rate  >", rep.q_min, "qubits per copy")
print("  net entanglement    =", rep.e_net, "ebits per copy")
print("  region: Q >", rep.q_min, "with Q + E >", rep.h_c_given_b)

# --- an entangled pair moving between the parties -------------------------
pair = StateVector(
    RegisterSystem.make([("C", 2, ALICE), ("A", 2, ALICE)]),
    np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2),
)
rep = redist_rates(pair, a=["A"], b=[], c=["C"], r=[])
print("moving half an entangled pair:", "e_net =", rep.e_net, "ebit")

# --- per-message rates of a protocol reproduce its cost terms -------------
rng = np.random.default_rng(2)
p = random_protocol(rng, 4)
rho = random_input_density(p, rng)
terms = qic_terms(p, rho)
reports = protocol_step_rates(p, rho)
print("per-message redistribution rates vs cost terms:")
for i, (t, r, d) in enumerate(zip(terms, reports, message_dims(p)), start=1):
    print(f"  message {i} (dim {d}): q_min {r.q_min:.6f} = term {t:.6f}, "
          f"e_net {r.e_net:+.4f} within +/-{math.log2(d) if d > 1 else 0.0}")
