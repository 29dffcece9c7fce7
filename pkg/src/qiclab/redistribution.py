"""Rate calculators for moving a register between parties of a pure state.

For a pure state on registers A (sender side), C (the register changing
hands), B (receiver side) and R (reference), the achievable region is a
quantum communication rate above half the conditional mutual information
I(C;R|B), with net entanglement consumption half of I(C;A) - I(C;B)
(generation when negative). Applied per message of a protocol this gives
a communication budget matching the protocol's information cost plus an
arbitrarily small overhead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .hilbert import ALICE, BOB, DEFAULT_MAX_DIM, StateVector, _prod
from .measures import cond_entropy, cond_mutual_info, mutual_info
from .protocol import ProtocolSpec, run


@dataclass(frozen=True)
class MessageRate:
    """Per-message communication and entanglement budget."""

    index: int
    q: float
    f: float


@dataclass(frozen=True)
class RateReport:
    """Single-shot redistribution rates and/or a per-message budget.

    ``q_min``/``e_net``/``h_c_given_b`` are filled by the single-shot
    calculator; ``per_message`` and ``total_rate`` by the protocol
    budget. ``total_rate`` for a budget includes the even split of the
    overhead across messages plus the blocklength-rounding reserve, so it
    equals the protocol's information cost plus the full overhead.
    """

    q_min: float | None = None
    e_net: float | None = None
    h_c_given_b: float | None = None
    per_message: tuple[MessageRate, ...] = ()
    total_rate: float = 0.0


def redist_rates(
    state: StateVector,
    a: Sequence[str],
    b: Sequence[str],
    c: Sequence[str],
    r: Sequence[str],
) -> RateReport:
    """Rates for sending block ``c`` from the ``a`` side to the ``b`` side.

    The four groups must partition the registers of the pure state.
    """
    if not isinstance(state, StateVector):
        raise ValueError("redistribution rates are defined on a pure global state")
    groups = list(a) + list(b) + list(c) + list(r)
    if sorted(groups) != sorted(state.system.names):
        raise ValueError(
            f"groups {sorted(groups)} do not partition the system {sorted(state.system.names)}"
        )
    q_min = 0.5 * cond_mutual_info(state, list(c), list(r), list(b))
    e_net = 0.5 * (
        mutual_info(state, list(c), list(a)) - mutual_info(state, list(c), list(b))
    )
    h = cond_entropy(state, list(c), list(b))
    return RateReport(q_min=q_min, e_net=e_net, h_c_given_b=h, total_rate=q_min)


def protocol_step_rates(
    p: ProtocolSpec,
    input_state,
    *,
    max_dim: int = DEFAULT_MAX_DIM,
) -> list[RateReport]:
    """Single-shot redistribution rates for every message of a protocol.

    Message i is the moving block, the receiver's holding is the side
    information, the sender's remaining registers the feedback side, and
    the input's purifying registers the reference.
    """
    traj = run(p, input_state, max_dim=max_dim)
    reports = []
    for i in range(1, p.num_messages + 1):
        st = traj.steps[i - 1]
        receiver = BOB if i % 2 == 1 else ALICE
        sender = ALICE if i % 2 == 1 else BOB
        reports.append(
            redist_rates(
                st,
                a=st.system.held_by(sender),
                b=st.system.held_by(receiver),
                c=p.messages[i - 1],
                r=st.system.reference_names,
            )
        )
    return reports


def compression_budget(
    p: ProtocolSpec,
    input_state,
    delta: float,
    *,
    max_dim: int = DEFAULT_MAX_DIM,
) -> RateReport:
    """Per-message rates whose total meets the information cost plus delta.

    Each message budget is its redistribution rate plus delta/(2M); the
    entanglement budget clamps generation to zero (generated entanglement
    is discarded, not reused). The reported total adds the delta/2
    blocklength reserve on top of the summed message rates, giving
    exactly the protocol's information cost plus delta.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    traj = run(p, input_state, max_dim=max_dim)
    m = p.num_messages
    per = []
    total_q = 0.0
    for i in range(1, m + 1):
        st = traj.steps[i - 1]
        receiver = BOB if i % 2 == 1 else ALICE
        sender = ALICE if i % 2 == 1 else BOB
        block = list(p.messages[i - 1])
        recv_hold = list(st.system.held_by(receiver))
        send_hold = list(st.system.held_by(sender))
        refs = list(st.system.reference_names)
        q_i = 0.5 * cond_mutual_info(st, block, refs, recv_hold) + delta / (2 * m)
        e_raw = 0.5 * (
            mutual_info(st, block, send_hold) - mutual_info(st, block, recv_hold)
        )
        f_i = max(0.0, e_raw) + delta / (2 * m)
        per.append(MessageRate(i, q_i, f_i))
        total_q += q_i
    return RateReport(
        per_message=tuple(per),
        total_rate=total_q + delta / 2.0,
    )


def message_dims(p: ProtocolSpec) -> list[int]:
    """Dimension of each message block (product over its registers)."""
    out = []
    for i in range(1, p.num_messages + 1):
        dims = {r.name: r.dim for r in p.unitaries[i - 1].out_regs}
        out.append(_prod(dims[n] for n in p.messages[i - 1]))
    return out
