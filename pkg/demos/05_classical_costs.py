#!/usr/bin/env python3
"""Classical tasks: function channels, failure bounds, information cost.

Runs a quantum protocol computing AND exactly and a deliberately noisy
one, relating the measured failure probability to half the channel-level
error; then checks that the classical information cost equals its
message-local rewriting on random classical protocols.
"""

import math

import numpy as np

from qiclab import (
    ALICE,
    BOB,
    QuantumTask,
    and_pair,
    classical_ic,
    classical_ic_prime,
    classical_state,
    exact_protocol_for,
    failure_probability,
    function_channel,
    noisy_protocol_for,
    protocol_error,
)
from qiclab.fuzz import random_classical_protocol, random_distribution

fp = and_pair()
mu = np.array([[0.3, 0.2], [0.25, 0.25]])
rho = classical_state(mu, [("A_in", 2, ALICE), ("B_in", 2, BOB)])
task = QuantumTask(function_channel(fp), rho, 2.0)

print("AND with an exact protocol:")
exact = exact_protocol_for(fp)
print("  failure probability =", failure_probability(exact, fp, mu))
print("  channel error       =", protocol_error(exact, task))

print("AND with a noisy protocol (both outputs rotated):")
for angle in (0.2, 0.5, math.pi / 2):
    noisy = noisy_protocol_for(fp, angle)
    fail = failure_probability(noisy, fp, mu)
    err = protocol_error(noisy, task)
    print(f"  angle {angle:.3f}: failure {fail:.4f} <= error/2 = {err / 2:.4f}")

print("classical information cost and its message-local rewriting:")
rng = np.random.default_rng(5)
for k in range(5):
    cp = random_classical_protocol(rng, int(rng.integers(1, 5)))
    w = random_distribution((2, 2), rng)
    ic = classical_ic(cp, w)
    icp = classical_ic_prime(cp, w)
    print(f"  protocol {k} ({cp.num_messages} messages): "
          f"{ic:.10f} vs {icp:.10f} (difference {abs(ic - icp):.1e})")
