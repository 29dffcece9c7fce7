"""Derived protocols built from existing ones.

* parallel composition: run two protocols side by side, information costs
  add on product inputs;
* input fixing: freeze one slot of a two-slot protocol with a purified
  state handed out as extra pre-shared entanglement, the per-slot costs
  split the joint cost exactly;
* coherent convex mixture: a selector register routes the input into one
  of two protocols and padding into the other, the mixture's information
  cost is the probability-weighted average;
* slot averaging: route a single instance coherently into one of the n
  slots of a many-slot protocol (the remaining slots fed from pre-shared
  purified copies), dividing the n-slot information cost by n.

Routing unitaries are selector-controlled permutations of basis-aligned
register blocks, so they are exact and unitary by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hilbert import (
    ALICE,
    BOB,
    DEFAULT_MAX_DIM,
    DensityOperator,
    Register,
    RegisterSystem,
    StateVector,
    UnitaryOp,
    _fresh_name,
    canonical_classical_purification,
    chain_unitaries,
    tensor,
)
from .protocol import (
    ProtocolSpec,
    ProtocolValidationError,
    Slot,
    purify_input,
    qic,
    suffix_protocol,
    validate,
)


def _require_valid(p: ProtocolSpec) -> None:
    findings = validate(p)
    if findings:
        raise ProtocolValidationError(findings)


def _digits(x: int, dims: Sequence[int]) -> list[int]:
    out = []
    for d in reversed(dims):
        out.append(x % d)
        x //= d
    return list(reversed(out))


def _index(digits: Sequence[int], dims: Sequence[int]) -> int:
    x = 0
    for g, d in zip(digits, dims):
        x = x * d + g
    return x


def controlled_permutation(
    control: Register,
    sources: Sequence[Register],
    targets: Sequence[Register],
    assign: Sequence[Sequence[int]],
) -> UnitaryOp:
    """Permutation of register contents controlled on a selector register.

    ``assign[v][t]`` names the source whose content lands in target ``t``
    when the control is in basis state ``v``; each row must be a bijection
    with matching dimensions. Consumes ``(control, *sources)``, produces
    ``(control, *targets)``.
    """
    n = control.dim
    if len(assign) != n:
        raise ValueError(f"need one assignment per control value ({n}), got {len(assign)}")
    sdims = [r.dim for r in sources]
    tdims = [r.dim for r in targets]
    d = 1
    for x in sdims:
        d *= x
    for v, row in enumerate(assign):
        if sorted(row) != list(range(len(sources))):
            raise ValueError(f"assignment for control={v} is not a bijection")
        for t, s in enumerate(row):
            if tdims[t] != sdims[s]:
                raise ValueError(
                    f"control={v}: target {targets[t].name!r} (dim {tdims[t]}) cannot "
                    f"take source {sources[s].name!r} (dim {sdims[s]})"
                )
    mat = np.zeros((n * d, n * d))
    for v in range(n):
        row = assign[v]
        for src in range(d):
            digits = _digits(src, sdims)
            tgt = _index([digits[row[t]] for t in range(len(targets))], tdims)
            mat[v * d + tgt, v * d + src] = 1.0
    return UnitaryOp.dense(
        mat, (control,) + tuple(sources), (control,) + tuple(targets)
    )


@dataclass(frozen=True)
class SelectorBlock:
    """Selector registers plus the padding pure states they route."""

    branch_count: int
    selector_state: StateVector
    padding: tuple[StateVector, ...]


def _selector_block(
    weights: Sequence[float], s_a: Register, s_b: Register, padding: Sequence[StateVector]
) -> SelectorBlock:
    n = len(weights)
    amps = np.zeros(n * n, dtype=complex)
    for i, w in enumerate(weights):
        amps[i * n + i] = math.sqrt(w)
    state = StateVector(
        RegisterSystem((s_a, s_b), (ALICE, BOB)), amps
    )
    return SelectorBlock(n, state, tuple(padding))


def _zero_state(regs: Sequence[Register], holder) -> StateVector:
    d = 1
    for r in regs:
        d *= r.dim
    amps = np.zeros(d, dtype=complex)
    amps[0] = 1.0
    return StateVector(
        RegisterSystem(tuple(regs), tuple(holder for _ in regs)), amps
    )


class _ProtocolBuilder:
    """Walks the alternating schedule, auto-extending each step's unitary
    with pass-through registers so it formally covers the speaker's whole
    holding."""

    def __init__(
        self,
        preshared: StateVector,
        alice_in: Sequence[Register],
        bob_in: Sequence[Register],
    ):
        self.preshared = preshared
        self.alice_in = tuple(alice_in)
        self.bob_in = tuple(bob_in)
        self.alice_hold: dict[str, Register] = {r.name: r for r in alice_in}
        self.bob_hold: dict[str, Register] = {r.name: r for r in bob_in}
        for r, h in zip(preshared.system.registers, preshared.system.holders):
            (self.alice_hold if h is ALICE else self.bob_hold)[r.name] = r
        self.incoming: dict[str, Register] = {}
        self.unitaries: list[UnitaryOp] = []
        self.messages: list[tuple[str, ...]] = []

    def step(self, core: UnitaryOp | None, message: Sequence[str] | None) -> None:
        i = len(self.unitaries) + 1
        alice_turn = i % 2 == 1
        hold = self.alice_hold if alice_turn else self.bob_hold
        expected = dict(hold)
        expected.update(self.incoming)
        if core is None:
            core = UnitaryOp((), (), ())
        stray = set(core.in_names) - set(expected)
        if stray:
            raise ValueError(
                f"step {i}: unitary consumes registers the speaker does not "
                f"hold: {sorted(stray)}"
            )
        missing = tuple(expected[n] for n in expected if n not in set(core.in_names))
        u = core.extended(missing)
        out_regs = {r.name: r for r in u.out_regs}
        msg = tuple(message) if message is not None else ()
        new_hold = {n: r for n, r in out_regs.items() if n not in set(msg)}
        if alice_turn:
            self.alice_hold = new_hold
        else:
            self.bob_hold = new_hold
        self.incoming = {n: out_regs[n] for n in msg}
        self.unitaries.append(u)
        if message is not None:
            self.messages.append(msg)

    def build(
        self,
        alice_out: Sequence[str],
        bob_out: Sequence[str],
        slots: Sequence[Slot] = (),
        notes: Sequence[str] = (),
    ) -> ProtocolSpec:
        p = ProtocolSpec(
            num_messages=len(self.messages),
            preshared=self.preshared,
            unitaries=tuple(self.unitaries),
            alice_in=self.alice_in,
            bob_in=self.bob_in,
            messages=tuple(self.messages),
            alice_out=tuple(alice_out),
            bob_out=tuple(bob_out),
            alice_scratch=tuple(n for n in self.alice_hold if n not in set(alice_out)),
            bob_scratch=tuple(n for n in self.bob_hold if n not in set(bob_out)),
            slots=tuple(slots),
            notes=tuple(notes),
        )
        _require_valid(p)
        return p


def _out_registers(p: ProtocolSpec, names: Sequence[str], final_bob: bool) -> tuple[Register, ...]:
    """Output registers (with dims) as produced by the closing unitaries."""
    u = p.unitaries[p.num_messages - 1] if final_bob else p.unitaries[p.num_messages]
    dims = {r.name: r.dim for r in u.out_regs}
    return tuple(Register(n, dims[n]) for n in names)


def parallel_compose(p1: ProtocolSpec, p2: ProtocolSpec) -> ProtocolSpec:
    """Run two protocols in parallel; the result implements their tensor.

    The shorter protocol finishes first and its registers then ride along
    untouched. Message blocks are the concatenation of the two protocols'
    blocks while both are running.
    """
    _require_valid(p1)
    _require_valid(p2)
    q1 = suffix_protocol(p1, "#1")
    q2 = suffix_protocol(p2, "#2")
    swapped = p2.num_messages > p1.num_messages
    longer, shorter = (q2, q1) if swapped else (q1, q2)
    m_long, m_short = longer.num_messages, shorter.num_messages
    preshared = tensor(q1.preshared, q2.preshared)
    builder = _ProtocolBuilder(
        preshared, q1.alice_in + q2.alice_in, q1.bob_in + q2.bob_in
    )
    for i in range(1, m_long + 2):
        if i <= m_short + 1:
            core = chain_unitaries(longer.unitaries[i - 1], shorter.unitaries[i - 1])
        else:
            core = longer.unitaries[i - 1]
        if i <= m_long:
            block = longer.messages[i - 1] + (
                shorter.messages[i - 1] if i <= m_short else ()
            )
            builder.step(core, block)
        else:
            builder.step(core, None)
    notes = ("second argument ran as the longer branch",) if swapped else ()
    return builder.build(
        q1.alice_out + q2.alice_out,
        q1.bob_out + q2.bob_out,
        slots=q1.input_slots + q2.input_slots,
        notes=notes,
    )


def fix_input(p2: ProtocolSpec, side: str, fixed: DensityOperator) -> ProtocolSpec:
    """Freeze one input slot of a two-slot protocol with a fixed state.

    The frozen state joins the pre-shared entanglement as a purification;
    the purifier goes to Alice when the second slot is frozen and to Bob
    when the first is, so it counts as holding in the information cost.
    """
    _require_valid(p2)
    if side not in ("first", "second"):
        raise ValueError(f"side must be 'first' or 'second', got {side!r}")
    slots = p2.input_slots
    if len(slots) != 2:
        raise ValueError(f"fix_input needs a protocol with two input slots, got {len(slots)}")
    frozen = slots[1] if side == "second" else slots[0]
    kept = slots[0] if side == "second" else slots[1]
    frozen_names = set(frozen.alice_in) | set(frozen.bob_in)
    reg_by_name = {r.name: r for r in p2.alice_in + p2.bob_in}
    want = {n: reg_by_name[n].dim for n in frozen_names}
    have = {r.name: r.dim for r in fixed.system.registers}
    if have != want:
        raise ValueError(
            f"fixed state registers {sorted(have)} do not match the frozen slot {sorted(want)}"
        )
    ref = _fresh_name("Rfix", p2.all_names)
    pure = purify_input(fixed, ref)
    holders = {n: ALICE for n in frozen.alice_in}
    holders.update({n: BOB for n in frozen.bob_in})
    holders[ref] = ALICE if side == "second" else BOB
    preshared = tensor(p2.preshared, pure.with_holders(holders))
    alice_in = tuple(r for r in p2.alice_in if r.name in set(kept.alice_in))
    bob_in = tuple(r for r in p2.bob_in if r.name in set(kept.bob_in))
    builder = _ProtocolBuilder(preshared, alice_in, bob_in)
    m = p2.num_messages
    for i in range(1, m + 2):
        builder.step(p2.unitaries[i - 1], p2.messages[i - 1] if i <= m else None)
    return builder.build(kept.alice_out, kept.bob_out, slots=(kept,))


def convex_mix(p1: ProtocolSpec, p2: ProtocolSpec, prob: float) -> ProtocolSpec:
    """Coherent mixture implementing prob * p1 + (1 - prob) * p2.

    A two-branch selector pair routes the input into the selected
    protocol and all-zeros padding into the other, both run in parallel,
    and the selector finally routes the selected outputs to the declared
    output registers. Tracing the selectors leaves the convex mixture.
    """
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"prob must lie in [0, 1], got {prob}")
    _require_valid(p1)
    _require_valid(p2)
    notes = []
    if p2.num_messages > p1.num_messages:
        p1, p2 = p2, p1
        prob = 1.0 - prob
        notes.append("branches swapped so the first runs longer")
    in_dims = tuple(r.dim for r in p1.alice_in), tuple(r.dim for r in p1.bob_in)
    if in_dims != (
        tuple(r.dim for r in p2.alice_in),
        tuple(r.dim for r in p2.bob_in),
    ):
        raise ValueError("the two protocols must share input register shapes")
    a1_out = _out_registers(p1, p1.alice_out, final_bob=False)
    b1_out = _out_registers(p1, p1.bob_out, final_bob=True)
    a2_out = _out_registers(p2, p2.alice_out, final_bob=False)
    b2_out = _out_registers(p2, p2.bob_out, final_bob=True)
    if tuple(r.dim for r in a1_out) != tuple(r.dim for r in a2_out) or tuple(
        r.dim for r in b1_out
    ) != tuple(r.dim for r in b2_out):
        raise ValueError("the two protocols must share output register shapes")

    q1 = suffix_protocol(p1, "#1")
    q2 = suffix_protocol(p2, "#2")
    mix_alice_in = tuple(Register(r.name, r.dim) for r in p1.alice_in)
    mix_bob_in = tuple(Register(r.name, r.dim) for r in p1.bob_in)
    mix_alice_out = tuple(Register(r.name, r.dim) for r in a1_out)
    mix_bob_out = tuple(Register(r.name, r.dim) for r in b1_out)
    taken = (
        q1.all_names
        | q2.all_names
        | {r.name for r in mix_alice_in + mix_bob_in + mix_alice_out + mix_bob_out}
    )

    def fresh(base: str, dim: int) -> Register:
        name = _fresh_name(base, taken)
        taken.add(name)
        return Register(name, dim)

    s_a = fresh("SA", 2)
    s_b = fresh("SB", 2)
    pad_a = [fresh(f"{r.name}~pad", r.dim) for r in mix_alice_in]
    pad_b = [fresh(f"{r.name}~pad", r.dim) for r in mix_bob_in]
    junk_a = [fresh(f"{r.name}~junk", r.dim) for r in mix_alice_out]
    junk_b = [fresh(f"{r.name}~junk", r.dim) for r in mix_bob_out]
    block = _selector_block(
        [prob, 1.0 - prob],
        s_a,
        s_b,
        (_zero_state(pad_a, ALICE), _zero_state(pad_b, BOB)),
    )
    preshared = tensor(q1.preshared, q2.preshared)
    preshared = tensor(preshared, block.selector_state)
    for pad in block.padding:
        preshared = tensor(preshared, pad)

    k_a = len(mix_alice_in)
    route_in_a = controlled_permutation(
        s_a,
        mix_alice_in + tuple(pad_a),
        q1.alice_in + q2.alice_in,
        [list(range(2 * k_a)), list(range(k_a, 2 * k_a)) + list(range(k_a))],
    )
    k_b = len(mix_bob_in)
    route_in_b = controlled_permutation(
        s_b,
        mix_bob_in + tuple(pad_b),
        q1.bob_in + q2.bob_in,
        [list(range(2 * k_b)), list(range(k_b, 2 * k_b)) + list(range(k_b))],
    )
    qa1 = _out_registers(q1, q1.alice_out, final_bob=False)
    qa2 = _out_registers(q2, q2.alice_out, final_bob=False)
    qb1 = _out_registers(q1, q1.bob_out, final_bob=True)
    qb2 = _out_registers(q2, q2.bob_out, final_bob=True)
    o_a = len(mix_alice_out)
    route_out_a = controlled_permutation(
        s_a,
        qa1 + qa2,
        mix_alice_out + tuple(junk_a),
        [list(range(2 * o_a)), list(range(o_a, 2 * o_a)) + list(range(o_a))],
    )
    o_b = len(mix_bob_out)
    route_out_b = controlled_permutation(
        s_b,
        qb1 + qb2,
        mix_bob_out + tuple(junk_b),
        [list(range(2 * o_b)), list(range(o_b, 2 * o_b)) + list(range(o_b))],
    )

    m1, m2 = q1.num_messages, q2.num_messages
    builder = _ProtocolBuilder(preshared, mix_alice_in, mix_bob_in)
    for i in range(1, m1 + 2):
        core = None

        def add(u: UnitaryOp) -> None:
            nonlocal core
            core = u if core is None else chain_unitaries(core, u)

        if i == 1:
            add(route_in_a)
        if i == 2:
            add(route_in_b)
        add(q1.unitaries[i - 1])
        if i <= m2 + 1:
            add(q2.unitaries[i - 1])
        if i == m1:
            add(route_out_b)
        if i == m1 + 1:
            add(route_out_a)
        if i <= m1:
            blocknames = q1.messages[i - 1] + (
                q2.messages[i - 1] if i <= m2 else ()
            )
            builder.step(core, blocknames)
        else:
            builder.step(core, None)
    slot = Slot(
        tuple(r.name for r in mix_alice_in),
        tuple(r.name for r in mix_bob_in),
        tuple(r.name for r in mix_alice_out),
        tuple(r.name for r in mix_bob_out),
    )
    return builder.build(
        [r.name for r in mix_alice_out],
        [r.name for r in mix_bob_out],
        slots=(slot,),
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class ConcavityReport:
    """Both sides of the input-concavity inequality and their slack."""

    lhs: float
    rhs: float
    slack: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.slack >= -self.tolerance


def concavity_check(
    p: ProtocolSpec,
    rho1: DensityOperator,
    rho2: DensityOperator,
    prob: float,
    tolerance: float = 1e-8,
    *,
    max_dim: int = DEFAULT_MAX_DIM,
) -> ConcavityReport:
    """Information cost of a mixed input vs the mixture of costs."""
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"prob must lie in [0, 1], got {prob}")
    if rho1.system.names != rho2.system.names or rho1.system.dims != rho2.system.dims:
        raise ValueError("the two states must live on the same registers")
    mixed = DensityOperator(
        rho1.system,
        prob * rho1.matrix + (1.0 - prob) * rho2.matrix,
        classical=rho1.classical and rho2.classical,
    )
    lhs = qic(p, mixed, max_dim=max_dim)
    rhs = prob * qic(p, rho1, max_dim=max_dim) + (1.0 - prob) * qic(
        p, rho2, max_dim=max_dim
    )
    return ConcavityReport(lhs, rhs, lhs - rhs, tolerance)


def _slot_dims(p: ProtocolSpec) -> tuple[int, int]:
    slots = p.input_slots
    reg_by = {r.name: r for r in p.alice_in + p.bob_in}
    for s in slots:
        if len(s.alice_in) != 1 or len(s.bob_in) != 1:
            raise ValueError("slot averaging needs one register per party per slot")
    da = reg_by[slots[0].alice_in[0]].dim
    db = reg_by[slots[0].bob_in[0]].dim
    for s in slots:
        if reg_by[s.alice_in[0]].dim != da or reg_by[s.bob_in[0]].dim != db:
            raise ValueError("all slots must share the same register dimensions")
    return da, db


def and_embed_protocol(
    pd: ProtocolSpec, mu: np.ndarray, index: int
) -> ProtocolSpec:
    """Single-slot protocol embedding an input at slot ``index``.

    The other slots are fed from pre-shared purified copies of the
    distribution ``mu``; purifiers of earlier slots go to Alice, later
    ones to Bob.
    """
    _require_valid(pd)
    slots = pd.input_slots
    n = len(slots)
    if not 1 <= index <= n:
        raise ValueError(f"slot index {index} out of range 1..{n}")
    da, db = _slot_dims(pd)
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (da, db):
        raise ValueError(f"distribution shape {mu.shape} does not match slots {(da, db)}")
    taken = set(pd.all_names)
    preshared = pd.preshared
    for j, slot in enumerate(slots, start=1):
        if j == index:
            continue
        ref = _fresh_name(f"Rcopy{j}", taken)
        taken.add(ref)
        pure = canonical_classical_purification(
            mu,
            alice_name=slot.alice_in[0],
            bob_name=slot.bob_in[0],
            ref_name=ref,
        )
        pure = pure.with_holders({ref: ALICE if j < index else BOB})
        preshared = tensor(preshared, pure)
    keep = slots[index - 1]
    reg_by = {r.name: r for r in pd.alice_in + pd.bob_in}
    builder = _ProtocolBuilder(
        preshared, (reg_by[keep.alice_in[0]],), (reg_by[keep.bob_in[0]],)
    )
    m = pd.num_messages
    for i in range(1, m + 2):
        builder.step(pd.unitaries[i - 1], pd.messages[i - 1] if i <= m else None)
    return builder.build(
        pd.alice_out,
        pd.bob_out,
        slots=(Slot(keep.alice_in, keep.bob_in, pd.alice_out, pd.bob_out),),
    )


def and_average_protocol(
    pd: ProtocolSpec, mu: np.ndarray, n: int
) -> ProtocolSpec:
    """Uniform coherent average of the n slot embeddings of a protocol.

    The pre-shared state carries 2n purified copies of ``mu`` (purifiers
    of the first n at Alice, the last n at Bob), padding zeros, and a
    uniform selector pair. On selector value i the input is routed into
    slot i, copies fill the other slots (earlier slots from Alice's
    copies, later from Bob's), and padding replaces the copies consumed.
    The message schedule of the underlying protocol is unchanged.
    """
    _require_valid(pd)
    if n < 2:
        raise ValueError(f"need at least two slots, got {n}")
    slots = pd.input_slots
    if len(slots) != n:
        raise ValueError(f"protocol exposes {len(slots)} input slots, expected {n}")
    da, db = _slot_dims(pd)
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (da, db):
        raise ValueError(f"distribution shape {mu.shape} does not match slots {(da, db)}")
    qd = suffix_protocol(pd, "#D")
    taken = set(qd.all_names)

    def fresh(base: str, dim: int) -> Register:
        name = _fresh_name(base, taken)
        taken.add(name)
        return Register(name, dim)

    a_in = fresh("A_in", da)
    b_in = fresh("B_in", db)
    s_a = fresh("SA", n)
    s_b = fresh("SB", n)
    copies_a: list[Register] = []
    copies_b: list[Register] = []
    preshared = qd.preshared
    for j in range(1, 2 * n + 1):
        ca = _fresh_name(f"DA{j}", taken)
        taken.add(ca)
        cb = _fresh_name(f"DB{j}", taken)
        taken.add(cb)
        ref = _fresh_name(f"DR{j}", taken)
        taken.add(ref)
        pure = canonical_classical_purification(
            mu, alice_name=ca, bob_name=cb, ref_name=ref
        )
        pure = pure.with_holders({ref: ALICE if j <= n else BOB})
        preshared = tensor(preshared, pure)
        copies_a.append(Register(ca, da))
        copies_b.append(Register(cb, db))
    pad_a = [fresh(f"PA{k}", da) for k in range(1, n)]
    pad_b = [fresh(f"PB{k}", db) for k in range(1, n)]
    home_a = [fresh(f"HA{j}", da) for j in range(1, 2 * n + 1)]
    home_b = [fresh(f"HB{j}", db) for j in range(1, 2 * n + 1)]
    block = _selector_block(
        [1.0 / n] * n,
        s_a,
        s_b,
        (_zero_state(pad_a, ALICE), _zero_state(pad_b, BOB)),
    )
    preshared = tensor(preshared, block.selector_state)
    for pad in block.padding:
        preshared = tensor(preshared, pad)

    # source indices: 0 = instance input, j = copy j (1..2n), 2n+k = padding k
    def routing_rows() -> list[list[int]]:
        rows = []
        for i in range(1, n + 1):
            row = []
            for j in range(1, n + 1):  # slot j
                if j < i:
                    row.append(j)
                elif j == i:
                    row.append(0)
                else:
                    row.append(n + j)
            used = sorted(
                [j for j in range(1, i)] + [n + j for j in range(i + 1, n + 1)]
            )
            used_set = set(used)
            pads = iter(range(2 * n + 1, 3 * n))
            for h in range(1, 2 * n + 1):  # home of copy h
                row.append(next(pads) if h in used_set else h)
            rows.append(row)
        return rows

    reg_by = {r.name: r for r in qd.alice_in + qd.bob_in}
    slot_regs_a = tuple(reg_by[s.alice_in[0] + "#D"] for s in slots)
    slot_regs_b = tuple(reg_by[s.bob_in[0] + "#D"] for s in slots)
    rows = routing_rows()
    route_a = controlled_permutation(
        s_a,
        (a_in,) + tuple(copies_a) + tuple(pad_a),
        slot_regs_a + tuple(home_a),
        rows,
    )
    route_b = controlled_permutation(
        s_b,
        (b_in,) + tuple(copies_b) + tuple(pad_b),
        slot_regs_b + tuple(home_b),
        rows,
    )
    builder = _ProtocolBuilder(preshared, (a_in,), (b_in,))
    m = qd.num_messages
    for i in range(1, m + 2):
        core = qd.unitaries[i - 1]
        if i == 1:
            core = chain_unitaries(route_a, core)
        if i == 2:
            core = chain_unitaries(route_b, core)
        builder.step(core, qd.messages[i - 1] if i <= m else None)
    return builder.build(
        qd.alice_out,
        qd.bob_out,
        slots=(Slot((a_in.name,), (b_in.name,), qd.alice_out, qd.bob_out),),
    )
