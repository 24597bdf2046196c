"""Circuit model over NOT / CNOT / 2-CNOT and the contiguous-layer depth metric."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels


class StructuralError(ValueError):
    """A circuit or gate violates an index/shape invariant."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class GateKind(enum.Enum):
    NOT = 0
    CNOT = 1
    CCNOT = 2

    @property
    def symbol(self) -> str:
        return "NCT"[self.value]


@dataclass(frozen=True)
class Gate:
    """Reversible element inverting ``target`` when every control line is 1.

    Controls are stored sorted, so two gates compare equal regardless of the
    order their controls were given in.
    """

    target: int
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        ctl = tuple(sorted(int(c) for c in self.controls))
        if len(ctl) > 2:
            raise ValueError(f"at most 2 controls are supported, got {len(ctl)}")
        object.__setattr__(self, "controls", ctl)
        object.__setattr__(self, "target", int(self.target))

    @property
    def kind(self) -> GateKind:
        return GateKind(len(self.controls))

    @property
    def support(self) -> frozenset[int]:
        return frozenset((self.target, *self.controls))

    def lines(self) -> tuple[int, ...]:
        return (*self.controls, self.target)

    def __str__(self):
        ctl = ",".join(str(c + 1) for c in self.controls)
        if not ctl:
            return f"N{self.target + 1}"
        return f"C{ctl};{self.target + 1}"


def not_gate(target: int) -> Gate:
    return Gate(target)


def cnot(control: int, target: int) -> Gate:
    return Gate(target, (control,))


def ccnot(control1: int, control2: int, target: int) -> Gate:
    return Gate(target, (control1, control2))


def gate_support(g: Gate) -> frozenset[int]:
    return g.support


def apply_gate(g: Gate, state: Sequence[int]) -> tuple[int, ...]:
    """Return ``state`` with the target bit XOR-ed by the AND of the control bits."""
    for line in g.lines():
        if not 0 <= line < len(state):
            raise StructuralError(f"line {line} out of range for state of length {len(state)}")
    out = [int(b) & 1 for b in state]
    if all(out[c] for c in g.controls):
        out[g.target] ^= 1
    return tuple(out)


def pack_gates(gates: Iterable[Gate]) -> np.ndarray:
    rows = []
    for g in gates:
        c = g.controls + (-1,) * (2 - len(g.controls))
        rows.append((g.target, c[0], c[1]))
    if not rows:
        return np.empty((0, 3), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64)


def unpack_gates(arr: np.ndarray) -> tuple[Gate, ...]:
    return tuple(Gate(t, tuple(c for c in (c1, c2) if c >= 0)) for t, c1, c2 in arr.tolist())


@dataclass(frozen=True)
class Circuit:
    """Gate sequence on ``width`` lines.

    Lines ``0 .. n_primary-1`` carry the primary inputs, the rest start at 0.
    ``output_map[j]`` is the line read as output ``j``.
    """

    width: int
    gates: tuple[Gate, ...] = ()
    n_primary: int | None = None
    output_map: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        n = self.width if self.n_primary is None else int(self.n_primary)
        object.__setattr__(self, "n_primary", n)
        om = tuple(range(n)) if self.output_map is None else tuple(int(x) for x in self.output_map)
        object.__setattr__(self, "output_map", om)

    def __len__(self):
        return len(self.gates)

    @property
    def n_ancilla(self) -> int:
        return self.width - self.n_primary

    @cached_property
    def array(self) -> np.ndarray:
        return pack_gates(self.gates)

    @property
    def depth(self) -> int:
        return greedy_layering(self).depth

    def check(self) -> "Circuit":
        problems = validate_circuit(self)
        if problems:
            raise StructuralError(problems)
        return self

    def then(self, other: "Circuit") -> "Circuit":
        """Sequential composition; ``other`` acts after ``self`` on the same lines."""
        if other.width != self.width:
            raise StructuralError(f"width mismatch {self.width} != {other.width}")
        return Circuit(self.width, self.gates + other.gates, self.n_primary, self.output_map)

    def kind_counts(self) -> dict[str, int]:
        counts = {"N": 0, "C": 0, "T": 0}
        for g in self.gates:
            counts[g.kind.symbol] += 1
        return counts


@dataclass(frozen=True)
class LayerPartition:
    """Contiguous ``[start, stop)`` blocks covering a gate sequence."""

    blocks: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    @property
    def depth(self) -> int:
        return len(self.blocks)

    def layers(self, circuit: Circuit) -> list[tuple[Gate, ...]]:
        return [circuit.gates[a:b] for a, b in self.blocks]


def validate_circuit(c: Circuit) -> list[str]:
    """Every invariant violation of ``c``; an empty list means the circuit is valid."""
    problems = []
    if c.width < 0:
        problems.append(f"negative width {c.width}")
    if not 0 <= c.n_primary <= c.width:
        problems.append(f"n_primary {c.n_primary} exceeds width {c.width}")
    for i, g in enumerate(c.gates):
        for line in g.lines():
            if not 0 <= line < c.width:
                problems.append(f"gate {i + 1}: line {line + 1} out of range")
        if g.target in g.controls:
            problems.append(f"gate {i + 1}: target in controls")
        if len(set(g.controls)) != len(g.controls):
            problems.append(f"gate {i + 1}: duplicate control")
    if len(c.output_map) != c.n_primary:
        problems.append(f"output map has {len(c.output_map)} entries, expected {c.n_primary}")
    seen = set()
    for line in c.output_map:
        if not 0 <= line < c.width:
            problems.append(f"output line {line + 1} out of range")
        if line in seen:
            problems.append(f"duplicate output line {line + 1}")
        seen.add(line)
    return problems


def greedy_layering(c: Circuit) -> LayerPartition:
    """Minimal contiguous partition into blocks of pairwise line-disjoint gates.

    Each gate joins the open block unless it shares a line with it. Disjointness
    is hereditary, so taking maximal prefixes is optimal.
    """
    ids = kernels.greedy_blocks(c.array, c.width)
    if ids.size == 0:
        return LayerPartition(())
    starts = np.flatnonzero(np.diff(ids, prepend=-1))
    stops = np.append(starts[1:], ids.size)
    return LayerPartition(tuple(zip(starts.tolist(), stops.tolist())))


def all_gates(width: int) -> list[Gate]:
    """Every NOT, CNOT and 2-CNOT on ``width`` lines in a fixed order."""
    out = []
    for t in range(width):
        out.append(Gate(t))
        out.extend(Gate(t, (c,)) for c in range(width) if c != t)
        others = [c for c in range(width) if c != t]
        out.extend(Gate(t, (a, b)) for i, a in enumerate(others) for b in others[i + 1:])
    return out


def random_circuit(width: int, n_gates: int, seed: int) -> Circuit:
    """Gates drawn uniformly from the gate alphabet with a PCG64 stream."""
    alphabet = all_gates(width)
    rng = np.random.Generator(np.random.PCG64(seed))
    picks = rng.integers(0, len(alphabet), size=n_gates) if alphabet else []
    return Circuit(width, tuple(alphabet[int(i)] for i in picks), width)


def relocate(c: Circuit, line_map: Mapping[int, int] | Sequence[int], width: int | None = None) -> Circuit:
    """Rename every line of ``c`` through an injective ``line_map``.

    The primary inputs stay primary only when they land on ``0 .. n_primary-1``
    in order; otherwise the result has no primary lines.
    """
    if isinstance(line_map, Mapping):
        lookup = dict(line_map)
    else:
        lookup = dict(enumerate(line_map))
    missing = [x for x in range(c.width) if x not in lookup]
    if missing:
        raise StructuralError(f"line map does not cover line {missing[0] + 1}")
    images = [lookup[x] for x in range(c.width)]
    if len(set(images)) != len(images):
        raise StructuralError("line map is not injective")
    new_width = (max(images) + 1 if images else 0) if width is None else width
    if any(not 0 <= y < new_width for y in images):
        raise StructuralError("line map image outside the new width")
    gates = tuple(Gate(lookup[g.target], tuple(lookup[x] for x in g.controls)) for g in c.gates)
    keeps_primary = all(lookup[i] == i for i in range(c.n_primary))
    if keeps_primary:
        return Circuit(new_width, gates, c.n_primary, tuple(lookup[x] for x in c.output_map))
    return Circuit(new_width, gates, 0, ())
