#!/usr/bin/env python3
"""Registers, states, reductions and entropic quantities.

Builds a few named-register states, reduces them, and evaluates the
entropy, mutual information and trace distance values one can check by
hand.
"""

import math

import numpy as np

from qiclab import (
    ALICE,
    BOB,
    REFERENCE,
    DensityOperator,
    RegisterSystem,
    StateVector,
    canonical_classical_purification,
    cond_mutual_info,
    entropy,
    mutual_info,
    purify,
    reduced_density,
    trace_distance,
)

# --- a maximally entangled pair of named qubits -------------------------
bell = StateVector(
    RegisterSystem.make([("A", 2, ALICE), ("B", 2, BOB)]),
    np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2),
)
print("Bell pair:")
print("  H(A)        =", entropy(bell, ["A"]), "(maximally mixed half)")
print("  I(A;B)      =", mutual_info(bell, ["A"], ["B"]), "(two bits)")

# --- a three-party chain: conditioning reveals one bit ------------------
amps = np.zeros(8, dtype=complex)
amps[0] = amps[7] = 1 / math.sqrt(2)
chain = StateVector(
    RegisterSystem.make([("A", 2, ALICE), ("B", 2, BOB), ("C", 2, REFERENCE)]), amps
)
print("three-party chain:")
print("  I(A;B)      =", mutual_info(chain, ["A"], ["B"]))
print("  I(A;B|C)    =", cond_mutual_info(chain, ["A"], ["B"], ["C"]))

# --- purification round trip ---------------------------------------------
rho = DensityOperator(
    RegisterSystem.make([("X", 2, ALICE)]), np.diag([0.25, 0.75]).astype(complex)
)
pure = purify(rho, "R")
back = reduced_density(pure, ["X"])
print("purification:")
print("  reference dimension =", pure.system.register("R").dim)
print("  round-trip error    =", np.max(np.abs(back.matrix - rho.matrix)))
print("  H(X) =", entropy(rho), "bits (binary entropy of 1/4)")

# --- classical joint distributions purify with a basis-labelled reference
mu = np.array([[1.0, 1.0], [1.0, 0.0]]) / 3.0
sigma = canonical_classical_purification(mu)
print("classical purification of a 3-point distribution:")
print("  registers =", sigma.system.names, "dims =", sigma.system.dims)

# --- trace distance between a basis state and a diagonal state ----------
zero = StateVector(RegisterSystem.make([("Q", 2, ALICE)]), np.array([1, 0], dtype=complex))
plus = StateVector(
    RegisterSystem.make([("Q", 2, ALICE)]), np.array([1, 1], dtype=complex) / math.sqrt(2)
)
print("trace distance |0> vs |+> =", trace_distance(zero, plus), "= sqrt(2)")
