"""Two-party interactive protocol model.

A protocol is a pre-shared pure state plus a sequence of unitaries with a
fixed alternating schedule: Alice acts on odd steps, Bob on even steps,
each unitary consuming the speaker's entire holding plus the incoming
message block and emitting the next message block. Costs:

* communication cost: sum over messages of log2 of the message dimension;
* information cost: sum over messages of half the conditional mutual
  information between the message and the input's purifying reference,
  conditioned on everything the receiver holds at that moment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .hilbert import (
    ALICE,
    BOB,
    DEFAULT_MAX_DIM,
    IN_FLIGHT,
    REFERENCE,
    ChannelOp,
    DensityOperator,
    Holder,
    Register,
    RegisterSystem,
    Stage,
    StateVector,
    UnitaryOp,
    _fresh_name,
    apply_unitary,
    canonical_purification,
    purify,
    reduced_density,
    tensor,
)
from .measures import cond_mutual_info, trace_norm


class ProtocolValidationError(ValueError):
    """Raised when an operation requires a protocol that fails validation."""

    def __init__(self, findings: Sequence[str]):
        super().__init__("; ".join(findings))
        self.findings = list(findings)


@dataclass(frozen=True)
class Slot:
    """One input/output slot of a protocol (register names per party)."""

    alice_in: tuple[str, ...]
    bob_in: tuple[str, ...]
    alice_out: tuple[str, ...] = ()
    bob_out: tuple[str, ...] = ()


@dataclass(frozen=True)
class ProtocolSpec:
    """A validated description of an interactive protocol.

    ``messages[i]`` names the register block emitted by unitary i+1; the
    final unitary emits no message. ``alice_scratch``/``bob_scratch`` are
    the local leftovers traced out of the protocol's channel output.
    """

    num_messages: int
    preshared: StateVector
    unitaries: tuple[UnitaryOp, ...]
    alice_in: tuple[Register, ...]
    bob_in: tuple[Register, ...]
    messages: tuple[tuple[str, ...], ...]
    alice_out: tuple[str, ...]
    bob_out: tuple[str, ...]
    alice_scratch: tuple[str, ...] = ()
    bob_scratch: tuple[str, ...] = ()
    slots: tuple[Slot, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.alice_in + self.bob_in)

    @property
    def input_slots(self) -> tuple[Slot, ...]:
        if self.slots:
            return self.slots
        return (
            Slot(
                tuple(r.name for r in self.alice_in),
                tuple(r.name for r in self.bob_in),
                self.alice_out,
                self.bob_out,
            ),
        )

    @property
    def all_names(self) -> set[str]:
        names = set(self.input_names) | set(self.preshared.system.names)
        for u in self.unitaries:
            names |= set(u.in_names) | set(u.out_names)
            for st in u.stages:
                names |= set(st.in_names) | {r.name for r in st.out_regs}
        return names


def validate(p: ProtocolSpec) -> list[str]:
    """Check the schedule; an empty list means the protocol is well formed."""
    findings: list[str] = []
    m = p.num_messages
    if m < 2 or m % 2 != 0:
        findings.append(
            f"protocols must have a positive even number of messages, got {m}"
        )
    if len(p.unitaries) != m + 1:
        findings.append(
            f"expected {m + 1} unitaries for {m} messages, got {len(p.unitaries)}"
        )
    if len(p.messages) != m:
        findings.append(
            f"expected {m} message blocks, got {len(p.messages)}"
        )
    if findings:
        return findings

    for r, h in zip(p.preshared.system.registers, p.preshared.system.holders):
        if h not in (ALICE, BOB):
            findings.append(
                f"pre-shared register {r.name!r} must be held by Alice or Bob"
            )
    in_names = list(p.input_names)
    if len(set(in_names)) != len(in_names):
        findings.append("duplicate input register names")
    clash = set(in_names) & set(p.preshared.system.names)
    if clash:
        findings.append(
            f"input registers collide with pre-shared registers: {sorted(clash)}"
        )
    if findings:
        return findings

    pres = p.preshared.system
    alice_hold = {r.name: r.dim for r in p.alice_in}
    bob_hold = {r.name: r.dim for r in p.bob_in}
    for r, h in zip(pres.registers, pres.holders):
        (alice_hold if h is ALICE else bob_hold)[r.name] = r.dim
    msg_prev: dict[str, int] = {}
    for i, u in enumerate(p.unitaries, start=1):
        alice_turn = i % 2 == 1
        speaker_hold = alice_hold if alice_turn else bob_hold
        expected = dict(speaker_hold)
        expected.update(msg_prev)
        got = {r.name: r.dim for r in u.in_regs}
        if got != expected:
            findings.append(
                f"U_{i} inputs {_fmt(got)} do not equal the speaker's holding plus "
                f"the incoming message {_fmt(expected)}"
            )
            return findings
        out = {r.name: r.dim for r in u.out_regs}
        if i <= m:
            msg = p.messages[i - 1]
            missing = [n for n in msg if n not in out]
            if missing:
                findings.append(
                    f"U_{i} outputs are missing message registers {missing}"
                )
                return findings
            msg_prev = {n: out[n] for n in msg}
            new_hold = {n: d for n, d in out.items() if n not in set(msg)}
        else:
            msg_prev = {}
            new_hold = out
        other_hold = bob_hold if alice_turn else alice_hold
        clash = set(out) & set(other_hold)
        if clash:
            findings.append(
                f"U_{i} output names collide with the other party's registers: "
                f"{sorted(clash)}"
            )
            return findings
        if alice_turn:
            alice_hold = new_hold
        else:
            bob_hold = new_hold

    declared_a = list(p.alice_out) + list(p.alice_scratch)
    if sorted(declared_a) != sorted(alice_hold):
        findings.append(
            f"declared Alice outputs+scratch {sorted(declared_a)} do not match her "
            f"final holding {sorted(alice_hold)}"
        )
    declared_b = list(p.bob_out) + list(p.bob_scratch)
    if sorted(declared_b) != sorted(bob_hold):
        findings.append(
            f"declared Bob outputs+scratch {sorted(declared_b)} do not match his "
            f"final holding {sorted(bob_hold)}"
        )
    return findings


def _fmt(d: Mapping[str, int]) -> str:
    return "{" + ", ".join(f"{k}:{v}" for k, v in sorted(d.items())) + "}"


@dataclass(frozen=True)
class QuantumTask:
    """A channel to implement, an input to implement it on, and an error budget."""

    channel: ChannelOp
    input: DensityOperator
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 2.0:
            raise ValueError(f"epsilon must lie in [0, 2], got {self.epsilon}")
        ch = {r.name: r.dim for r in self.channel.in_regs}
        st = {r.name: r.dim for r in self.input.system.registers}
        if ch != st:
            raise ValueError(
                f"channel input registers {_fmt(ch)} do not match state registers {_fmt(st)}"
            )


@dataclass(frozen=True)
class Trajectory:
    """Global pure states after each message, plus the channel output."""

    steps: tuple[StateVector, ...]
    final_state: StateVector
    output: DensityOperator


def purify_input(rho: DensityOperator, ref_name: str) -> StateVector:
    """Purify a protocol input: basis-labelled if classical, spectral otherwise."""
    if rho.classical:
        return canonical_purification(rho, ref_name=ref_name)
    return purify(rho, ref_name=ref_name)


def _prepare_input(p: ProtocolSpec, input_state, ref_name: str = "R") -> StateVector:
    in_regs = p.alice_in + p.bob_in
    want = {r.name: r.dim for r in in_regs}
    if isinstance(input_state, DensityOperator):
        have = {r.name: r.dim for r in input_state.system.registers}
        if have != want:
            raise ValueError(
                f"input registers {_fmt(have)} do not match protocol inputs {_fmt(want)}"
            )
        fresh = _fresh_name(ref_name, p.all_names)
        vec = purify_input(input_state, fresh)
    elif isinstance(input_state, StateVector):
        vec = input_state
        for r in in_regs:
            got = vec.system.register(r.name)
            if got.dim != r.dim:
                raise ValueError(
                    f"input register {r.name!r} has dim {got.dim}, expected {r.dim}"
                )
        extra = [n for n in vec.system.names if n not in want]
        clash = set(extra) & (p.all_names - set(want))
        if clash:
            raise ValueError(
                f"input reference registers collide with protocol registers: {sorted(clash)}"
            )
    else:
        raise TypeError(f"cannot run a protocol on {type(input_state).__name__}")
    holders: dict[str, Holder] = {r.name: ALICE for r in p.alice_in}
    holders.update({r.name: BOB for r in p.bob_in})
    holders.update(
        {n: REFERENCE for n in vec.system.names if n not in holders}
    )
    return vec.with_holders(holders)


def run(
    p: ProtocolSpec,
    input_state,
    *,
    max_dim: int = DEFAULT_MAX_DIM,
    ref_name: str = "R",
) -> Trajectory:
    """Simulate the protocol globally on a (purified) input.

    Mixed inputs are purified first; the reference registers ride along
    untouched and appear in the output reduction.
    """
    findings = validate(p)
    if findings:
        raise ProtocolValidationError(findings)
    vec = _prepare_input(p, input_state, ref_name)
    state = tensor(vec, p.preshared)
    if state.system.total_dim > max_dim:
        raise ValueError(
            f"global dimension {state.system.total_dim} exceeds max_dim={max_dim}"
        )
    m = p.num_messages
    steps: list[StateVector] = []
    prev_msg: set[str] = set()
    for i, u in enumerate(p.unitaries, start=1):
        speaker = ALICE if i % 2 == 1 else BOB
        msg = set(p.messages[i - 1]) if i <= m else set()
        holders = {}
        for st in u.stages:
            for r in st.out_regs:
                holders[r.name] = IN_FLIGHT if r.name in msg else speaker
        state = apply_unitary(state, u, holders=holders)
        # registers the unitary only passed through still change hands:
        # the incoming block lands with the speaker, the outgoing block
        # is in flight, whether or not a stage touched them
        retag = {n: speaker for n in (prev_msg & set(state.system.names)) - msg}
        retag.update({n: IN_FLIGHT for n in msg})
        state = state.with_holders(retag)
        prev_msg = msg
        if i <= m:
            steps.append(state)
    refs = list(state.system.reference_names)
    keep = list(p.alice_out) + list(p.bob_out) + refs
    output = reduced_density(state, keep)
    return Trajectory(tuple(steps), state, output)


def qcc(p: ProtocolSpec) -> float:
    """Communication cost: sum of log2 message dimensions, in qubits."""
    findings = validate(p)
    if findings:
        raise ProtocolValidationError(findings)
    total = 0.0
    for i in range(1, p.num_messages + 1):
        dims = {r.name: r.dim for r in p.unitaries[i - 1].out_regs}
        total += sum(math.log2(dims[n]) for n in p.messages[i - 1])
    return total


def qic_terms(
    p: ProtocolSpec,
    input_state,
    *,
    max_dim: int = DEFAULT_MAX_DIM,
) -> list[float]:
    """Per-message information cost terms (half CMI against the reference)."""
    traj = run(p, input_state, max_dim=max_dim)
    terms = []
    for i in range(1, p.num_messages + 1):
        st = traj.steps[i - 1]
        receiver = BOB if i % 2 == 1 else ALICE
        holding = list(st.system.held_by(receiver))
        refs = list(st.system.reference_names)
        block = list(p.messages[i - 1])
        terms.append(0.5 * cond_mutual_info(st, block, refs, holding))
    return terms


def qic(p: ProtocolSpec, input_state, *, max_dim: int = DEFAULT_MAX_DIM) -> float:
    """Information cost of the protocol on the given input, in qubits."""
    return float(sum(qic_terms(p, input_state, max_dim=max_dim)))


def protocol_error(
    p: ProtocolSpec, task: QuantumTask, *, max_dim: int = DEFAULT_MAX_DIM
) -> float:
    """Trace distance between the protocol's channel and the target channel.

    Both are applied to the same purification of the task input, with the
    target channel acting as its dilation tensored with the identity on
    the reference.
    """
    in_names = list(p.input_names)
    ch = task.channel
    ch_names = [r.name for r in ch.in_regs]
    if set(ch_names) != set(in_names):
        raise ValueError(
            f"channel inputs {sorted(ch_names)} do not match protocol inputs {sorted(in_names)}"
        )
    pure = _prepare_input(p, task.input)
    refs = [n for n in pure.system.names if n not in set(in_names)]
    traj = run(p, pure, max_dim=max_dim)
    out1 = reduced_density(
        traj.final_state, list(p.alice_out) + list(p.bob_out) + refs
    )
    vec2, ch2 = ch.apply_to_vector(pure)
    out2 = reduced_density(vec2, list(ch2.out_names) + refs)
    if out1.system.dims != out2.system.dims:
        raise ValueError(
            f"output dimensions differ: {out1.system.dims} vs {out2.system.dims}"
        )
    return trace_norm(out1.matrix - out2.matrix)


def rename_state(state, mapping: Mapping[str, str]):
    """Relabel registers of a state (no physical change)."""
    system = state.system
    regs = tuple(
        Register(mapping.get(r.name, r.name), r.dim) for r in system.registers
    )
    new_system = RegisterSystem(regs, system.holders)
    if isinstance(state, StateVector):
        return StateVector._unchecked(new_system, state.amplitudes)
    return DensityOperator._unchecked(new_system, state.matrix, state.classical)


def nfold_error_check(
    p_n: ProtocolSpec,
    task: QuantumTask,
    n: int,
    *,
    max_dim: int = DEFAULT_MAX_DIM,
) -> list[float]:
    """Per-copy errors of a protocol for n parallel instances of a task.

    The i-th entry compares the reduction to copy i's outputs and its own
    reference factor against the single-copy channel output; the check
    succeeds when every entry is at most ``task.epsilon``.
    """
    slots = p_n.input_slots
    if len(slots) != n:
        raise ValueError(f"protocol exposes {len(slots)} input slots, expected {n}")
    ch = task.channel
    ch_in = [r.name for r in ch.in_regs]
    copies = []
    targets = []
    for i, slot in enumerate(slots, start=1):
        slot_names = list(slot.alice_in) + list(slot.bob_in)
        if len(slot_names) != len(ch_in):
            raise ValueError(f"slot {i} arity does not match the channel input")
        ref = f"R@{i}"
        pure_i = purify_input(task.input, ref)
        vec_i, ch_i = ch.apply_to_vector(pure_i)
        targets.append(reduced_density(vec_i, list(ch_i.out_names) + [ref]))
        mapping = dict(zip(ch_in, slot_names))
        copies.append(rename_state(pure_i, mapping))
    joint = copies[0]
    for c in copies[1:]:
        joint = tensor(joint, c)
    traj = run(p_n, joint, max_dim=max_dim)
    entries = []
    for i, slot in enumerate(slots, start=1):
        keep = list(slot.alice_out) + list(slot.bob_out) + [f"R@{i}"]
        lhs = reduced_density(traj.final_state, keep)
        rhs = targets[i - 1]
        if lhs.system.dims != rhs.system.dims:
            raise ValueError(
                f"copy {i}: output dimensions differ: {lhs.system.dims} vs {rhs.system.dims}"
            )
        entries.append(trace_norm(lhs.matrix - rhs.matrix))
    return entries


def rename_protocol(p: ProtocolSpec, mapping: Mapping[str, str]) -> ProtocolSpec:
    """Apply a register-name mapping to every component of a protocol."""

    def name(n: str) -> str:
        return mapping.get(n, n)

    def reg(r: Register) -> Register:
        return Register(name(r.name), r.dim)

    pres_sys = p.preshared.system
    preshared = StateVector._unchecked(
        RegisterSystem(tuple(reg(r) for r in pres_sys.registers), pres_sys.holders),
        p.preshared.amplitudes,
    )
    unitaries = []
    for u in p.unitaries:
        stages = tuple(
            Stage(
                st.matrix,
                tuple(name(x) for x in st.in_names),
                tuple(reg(r) for r in st.out_regs),
            )
            for st in u.stages
        )
        unitaries.append(
            UnitaryOp(
                tuple(reg(r) for r in u.in_regs),
                tuple(reg(r) for r in u.out_regs),
                stages,
            )
        )
    slots = tuple(
        Slot(
            tuple(name(x) for x in s.alice_in),
            tuple(name(x) for x in s.bob_in),
            tuple(name(x) for x in s.alice_out),
            tuple(name(x) for x in s.bob_out),
        )
        for s in p.slots
    )
    return ProtocolSpec(
        num_messages=p.num_messages,
        preshared=preshared,
        unitaries=tuple(unitaries),
        alice_in=tuple(reg(r) for r in p.alice_in),
        bob_in=tuple(reg(r) for r in p.bob_in),
        messages=tuple(tuple(name(x) for x in block) for block in p.messages),
        alice_out=tuple(name(x) for x in p.alice_out),
        bob_out=tuple(name(x) for x in p.bob_out),
        alice_scratch=tuple(name(x) for x in p.alice_scratch),
        bob_scratch=tuple(name(x) for x in p.bob_scratch),
        slots=slots,
        notes=p.notes,
    )


def suffix_protocol(p: ProtocolSpec, suffix: str) -> ProtocolSpec:
    """Rename every register of a protocol with a suffix."""
    mapping = {n: n + suffix for n in p.all_names}
    return rename_protocol(p, mapping)


def pad_rounds(p: ProtocolSpec, rounds: int = 2) -> ProtocolSpec:
    """Append trivial one-dimensional message rounds to a protocol.

    Padding rounds carry dimension-1 communication registers, so both
    costs are unchanged; useful for aligning message counts.
    """
    if rounds <= 0 or rounds % 2 != 0:
        raise ValueError("rounds must be a positive even integer")
    findings = validate(p)
    if findings:
        raise ProtocolValidationError(findings)
    taken = set(p.all_names)
    pads = []
    for k in range(rounds):
        name = _fresh_name(f"Cpad{k + 1}", taken)
        taken.add(name)
        pads.append(name)

    def create(name: str) -> Stage:
        return Stage(np.eye(1), (), (Register(name, 1),))

    def drop(name: str) -> Stage:
        return Stage(np.eye(1), (name,), ())

    m = p.num_messages
    alice_final = p.unitaries[m]  # U_{M+1}
    bob_regs = tuple(
        Register(n, {r.name: r.dim for r in p.unitaries[m - 1].out_regs}[n])
        for n in list(p.bob_out) + list(p.bob_scratch)
    )
    alice_regs = tuple(
        Register(n, {r.name: r.dim for r in alice_final.out_regs}[n])
        for n in list(p.alice_out) + list(p.alice_scratch)
    )
    unitaries = list(p.unitaries[:m])
    messages = list(p.messages)
    prev = None
    for k, cname in enumerate(pads):
        creg = Register(cname, 1)
        if k == 0:
            u = UnitaryOp(
                alice_final.in_regs,
                alice_final.out_regs + (creg,),
                alice_final.stages + (create(cname),),
            )
        else:
            mine = alice_regs if k % 2 == 0 else bob_regs
            prev_reg = Register(prev, 1)
            u = UnitaryOp(
                mine + (prev_reg,),
                mine + (creg,),
                (drop(prev), create(cname)),
            )
        unitaries.append(u)
        messages.append((cname,))
        prev = cname
    closer_side = alice_regs if rounds % 2 == 0 else bob_regs
    unitaries.append(
        UnitaryOp(closer_side + (Register(prev, 1),), closer_side, (drop(prev),))
    )
    return replace(
        p,
        num_messages=m + rounds,
        unitaries=tuple(unitaries),
        messages=tuple(messages),
    )
