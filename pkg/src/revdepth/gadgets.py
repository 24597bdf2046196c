"""Subcircuit builders: basis gadgets, copy trees, XOR folds and minterm/XOR families.

Builders append gates in a dependency-respecting order and report the result
as ASAP layers, so flattening the layers gives a circuit whose greedy depth is
at most the layer count.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .core import Circuit, Gate, ccnot, cnot, not_gate, pack_gates

FAMILY_CAP = 12


class LineAllocator:
    """Hands out fresh line indices, never reusing one."""

    def __init__(self, next_free: int = 0):
        self.start = next_free
        self.next_free = next_free

    def take(self, count: int = 1) -> list[int]:
        if count < 0:
            raise ValueError("count must be non-negative")
        lines = list(range(self.next_free, self.next_free + count))
        self.next_free += count
        return lines

    def one(self) -> int:
        return self.take(1)[0]

    @property
    def used(self) -> int:
        return self.next_free - self.start


def asap_layers(gates: Sequence[Gate]) -> list[tuple[Gate, ...]]:
    """Group gates by earliest layer; relative order of gates sharing a line is kept."""
    if not gates:
        return []
    arr = pack_gates(gates)
    levels = kernels.asap_levels(arr, int(arr.max()) + 1)
    layers: list[list[Gate]] = [[] for _ in range(int(levels.max()) + 1)]
    for g, lvl in zip(gates, levels.tolist()):
        layers[lvl].append(g)
    return [tuple(layer) for layer in layers]


def asap_depth(gates: Sequence[Gate]) -> int:
    if not gates:
        return 0
    arr = pack_gates(gates)
    return int(kernels.asap_levels(arr, int(arr.max()) + 1).max()) + 1


@dataclass
class GadgetResult:
    layers: list[tuple[Gate, ...]]
    outputs: dict = field(default_factory=dict)
    ancilla_used: int = 0

    @classmethod
    def from_gates(cls, gates: Sequence[Gate], outputs: dict, ancilla_used: int) -> "GadgetResult":
        return cls(asap_layers(gates), outputs, ancilla_used)

    @property
    def gates(self) -> list[Gate]:
        return [g for layer in self.layers for g in layer]

    @property
    def depth(self) -> int:
        return len(self.layers)

    def circuit(self, width: int, n_primary: int = 0) -> Circuit:
        return Circuit(width, tuple(self.gates), n_primary, tuple(range(n_primary)))


class BasisOp(enum.Enum):
    NEG = "neg"
    XOR = "xor"
    AND = "and"


def basis_gadget(op: BasisOp, inputs: Sequence[int], alloc: LineAllocator) -> GadgetResult:
    """Compute NEG / XOR / AND of input lines into one fresh line; inputs are only read."""
    op = BasisOp(op)
    arity = 1 if op is BasisOp.NEG else 2
    if len(inputs) != arity or len(set(inputs)) != arity:
        raise ValueError(f"{op.value} takes {arity} distinct input lines")
    a = alloc.one()
    if op is BasisOp.NEG:
        gates = [cnot(inputs[0], a), not_gate(a)]
    elif op is BasisOp.XOR:
        gates = [cnot(inputs[0], a), cnot(inputs[1], a)]
    else:
        gates = [ccnot(inputs[0], inputs[1], a)]
    return GadgetResult.from_gates(gates, {"out": a}, 1)


def copy_tree_gates(src: int, copies: Sequence[int]) -> list[Gate]:
    """Doubling schedule: every line already holding the value feeds one new copy per layer."""
    gates = []
    holders = [src]
    pending = list(copies)
    while pending:
        batch, pending = pending[: len(holders)], pending[len(holders):]
        gates.extend(cnot(h, dst) for h, dst in zip(holders, batch))
        holders.extend(batch)
    return gates


def copy_tree(src: int, k: int, alloc: LineAllocator) -> GadgetResult:
    if k < 0:
        raise ValueError("copy count must be non-negative")
    copies = alloc.take(k)
    return GadgetResult.from_gates(copy_tree_gates(src, copies), {"copies": copies}, k)


def xor_fold_gates(lines: Sequence[int]) -> tuple[list[Gate], int]:
    """Balanced pairwise fold onto ``lines[0]``; odd positions are only ever read."""
    level = list(lines)
    gates = []
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level) - 1, 2):
            gates.append(cnot(level[i + 1], level[i]))
            nxt.append(level[i])
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return gates, level[0]


def xor_fold(lines: Sequence[int]) -> GadgetResult:
    """XOR of all ``lines`` into one of them, with no fresh ancilla and log depth."""
    if not lines:
        raise ValueError("xor_fold needs at least one line")
    if len(set(lines)) != len(lines):
        raise ValueError("xor_fold lines must be distinct")
    gates, acc = xor_fold_gates(lines)
    return GadgetResult.from_gates(gates, {"acc": acc}, 0)


class FanOut:
    """Holders of one value, sized for a set of uses.

    A control use tagged with round ``t`` gets a holder that no other use of
    round ``t`` shares; a consumed use (the line will become a gate target)
    gets a holder of its own. ``src`` doubles as a holder unless it is
    protected against being overwritten.
    """

    def __init__(self, src: int, rounds: Sequence[int], consumed: int, alloc: LineAllocator,
                 protected: bool = True):
        per_round = Counter(rounds)
        n_ctl = max(per_round.values(), default=0)
        holders = [src] if (n_ctl or not protected) and (n_ctl or consumed) else []
        need = n_ctl + consumed - len(holders)
        copies = alloc.take(max(need, 0))
        self.gates = copy_tree_gates(src, copies)
        holders.extend(copies)
        self.ancilla = len(copies)
        seen: Counter = Counter()
        self.control_holders = []
        for t in rounds:
            self.control_holders.append(holders[seen[t]])
            seen[t] += 1
        self.consumed_holders = holders[n_ctl:n_ctl + consumed]


def _cross(a_lines: dict, b_lines: dict, pairs: Iterable[tuple], op: BasisOp, alloc: LineAllocator,
           reuse: int, protected: set) -> tuple[list[Gate], dict]:
    """Combine every requested ``(a_key, b_key)`` pair into a fresh line with AND or XOR.

    Pair ``(i, j)`` (by position) runs in round ``(i + j) % reuse``, so each
    operand holder is read at most once per round.
    """
    a_pos = {key: i for i, key in enumerate(a_lines)}
    b_pos = {key: j for j, key in enumerate(b_lines)}
    pairs = sorted(pairs, key=lambda ab: ((a_pos[ab[0]] + b_pos[ab[1]]) % reuse, a_pos[ab[0]], b_pos[ab[1]]))
    rnd = [(a_pos[a] + b_pos[b]) % reuse for a, b in pairs]
    uses_a: dict = {key: [] for key in a_lines}
    uses_b: dict = {key: [] for key in b_lines}
    for idx, (a, b) in enumerate(pairs):
        uses_a[a].append(idx)
        uses_b[b].append(idx)
    gates: list[Gate] = []
    holder_a = [0] * len(pairs)
    holder_b = [0] * len(pairs)
    for lines, uses, holder in ((a_lines, uses_a, holder_a), (b_lines, uses_b, holder_b)):
        for key, idxs in uses.items():
            if not idxs:
                continue
            fan = FanOut(lines[key], [rnd[i] for i in idxs], 0, alloc, lines[key] in protected)
            gates.extend(fan.gates)
            for i, h in zip(idxs, fan.control_holders):
                holder[i] = h
    outputs = {}
    targets = alloc.take(len(pairs))
    for idx, (a, b) in enumerate(pairs):
        t = targets[idx]
        if op is BasisOp.AND:
            gates.append(ccnot(holder_a[idx], holder_b[idx], t))
        else:
            gates.append(cnot(holder_a[idx], t))
            gates.append(cnot(holder_b[idx], t))
        outputs[(a, b)] = t
    return gates, outputs


def minterm_family(variables: Sequence[int], alloc: LineAllocator, reuse: int = 2,
                   cap: int = FAMILY_CAP) -> GadgetResult:
    """Lines for all 2**k minterms of ``variables``.

    Output ``sigma`` (an int whose most significant of k bits refers to
    ``variables[0]``) holds the conjunction of x_i for set bits and not x_i for
    clear bits. Negations come first in one depth-2 layer; the family of the
    first ceil(k/2) and last floor(k/2) variables are then crossed with
    one 2-CNOT per pair.
    """
    k = len(variables)
    if not 1 <= k <= cap:
        raise ValueError(f"minterm family size {k} outside 1..{cap}")
    start = alloc.used
    gates: list[Gate] = []
    negs = {}
    for v in variables:
        res = basis_gadget(BasisOp.NEG, [v], alloc)
        gates.extend(res.gates)
        negs[v] = res.outputs["out"]
    protected = set(variables)

    def build(vs):
        if len(vs) == 1:
            return {1: vs[0], 0: negs[vs[0]]}
        h = (len(vs) + 1) // 2
        fa, fb = build(vs[:h]), build(vs[h:])
        pairs = [(a, b) for a in fa for b in fb]
        cross_gates, outs = _cross(fa, fb, pairs, BasisOp.AND, alloc, reuse, protected)
        gates.extend(cross_gates)
        shift = len(vs) - h
        return {(a << shift) | b: line for (a, b), line in outs.items()}

    family = build(list(variables))
    outputs = {sigma: family[sigma] for sigma in range(1 << k)}
    return GadgetResult.from_gates(gates, outputs, alloc.used - start)


def xor_subset_family(group: Sequence[int], demanded: Iterable[int] | None, alloc: LineAllocator,
                      reuse: int = 2, cap: int = FAMILY_CAP,
                      protected: Iterable[int] = ()) -> GadgetResult:
    """Lines holding the XOR of the group lines selected by each demanded mask.

    Bit b of a mask selects ``group[b]``. ``demanded=None`` builds all 2**s
    masks. Mask 0 is a fresh untouched line; single-bit masks are the group
    lines themselves.
    """
    s = len(group)
    if not 1 <= s <= cap:
        raise ValueError(f"group size {s} outside 1..{cap}")
    masks = set(range(1 << s)) if demanded is None else {int(m) for m in demanded}
    if any(not 0 <= m < (1 << s) for m in masks):
        raise ValueError(f"mask outside {s} bits")
    start = alloc.used
    gates: list[Gate] = []
    protected = set(protected)

    def build(lines, want):
        if len(lines) == 1:
            return {1: lines[0]} if 1 in want else {}
        h = (len(lines) + 1) // 2
        lo_mask = (1 << h) - 1
        lo_want = {m & lo_mask for m in want} - {0}
        hi_want = {m >> h for m in want} - {0}
        lo, hi = build(lines[:h], lo_want), build(lines[h:], hi_want)
        out = {m: lo[m] for m in lo_want if m in want}
        out.update({m << h: hi[m] for m in hi_want if (m << h) in want})
        pairs = sorted({(m & lo_mask, m >> h) for m in want if m & lo_mask and m >> h})
        if pairs:
            cross_gates, made = _cross(lo, hi, pairs, BasisOp.XOR, alloc, reuse, protected)
            gates.extend(cross_gates)
            out.update({a | (b << h): line for (a, b), line in made.items()})
        return out

    outputs = build(list(group), masks - {0})
    if 0 in masks:
        outputs[0] = alloc.one()
    outputs = dict(sorted(outputs.items()))
    return GadgetResult.from_gates(gates, outputs, alloc.used - start)
