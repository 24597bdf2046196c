"""Simulation, permutation extraction and the realization check.

Bit order is fixed everywhere: an input tuple ``<x1, ..., xn>`` is the integer
whose most significant bit is ``x1``, and line ``i`` (0-based) carries ``x_{i+1}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .core import Circuit, StructuralError, validate_circuit

TT_CAP = 20
PERM_CAP = 20


class ResourceError(RuntimeError):
    """A size cap guarding memory was exceeded."""


def int_to_bits(value: int, n: int) -> tuple[int, ...]:
    return tuple((value >> (n - 1 - i)) & 1 for i in range(n))


def bits_to_int(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | (int(b) & 1)
    return v


@dataclass(frozen=True, eq=False)
class TruthTable:
    """A total map Z_2^n -> Z_2^n stored as ``values[x] = f(x)``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.uint32)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} rows, got {vals.shape[0] if vals.ndim else 0}")
        if self.n < 32 and np.any(vals >> np.uint32(self.n)):
            raise ValueError(f"row value exceeds {self.n} bits")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __eq__(self, other):
        return isinstance(other, TruthTable) and self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return int_to_bits(int(self.values[bits_to_int(x)]), self.n)

    def output_bit(self, j: int) -> np.ndarray:
        """Column of output ``y_{j+1}`` as a 0/1 array over all inputs."""
        return ((self.values >> np.uint32(self.n - 1 - j)) & 1).astype(np.uint8)

    @classmethod
    def from_function(cls, n: int, func: Callable[[int], int]) -> "TruthTable":
        return cls(n, np.array([func(x) for x in range(1 << n)], dtype=np.uint32))

    @classmethod
    def identity(cls, n: int) -> "TruthTable":
        return cls(n, np.arange(1 << n, dtype=np.uint32))

    @classmethod
    def complement(cls, n: int) -> "TruthTable":
        return cls(n, np.arange(1 << n, dtype=np.uint32) ^ np.uint32((1 << n) - 1))

    @classmethod
    def constant(cls, n: int, value: int = 0) -> "TruthTable":
        return cls(n, np.full(1 << n, value, dtype=np.uint32))

    @classmethod
    def bit_reversal(cls, n: int) -> "TruthTable":
        return cls.from_function(n, lambda x: int(format(x, f"0{n}b")[::-1], 2) if n else 0)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "TruthTable":
        return cls(n, rng.integers(0, 1 << n, size=1 << n, dtype=np.uint32))


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    words = (bits.size + 63) // 64
    padded = np.zeros(words * 64, dtype=np.uint8)
    padded[: bits.size] = bits
    return np.packbits(padded, bitorder="little").view("<u8").astype(np.uint64)


def _unpack_bits(words: np.ndarray, count: int) -> np.ndarray:
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:count]


@dataclass(frozen=True, eq=False)
class LineFunctionTable:
    """Packed Boolean function of every line over all ``2**n`` primary inputs."""

    n: int
    words: np.ndarray  # (width, ceil(2**n / 64)) uint64

    @property
    def width(self) -> int:
        return self.words.shape[0]

    def line(self, index: int) -> np.ndarray:
        return _unpack_bits(self.words[index], 1 << self.n)

    def bit(self, index: int, x: int) -> int:
        return int((self.words[index, x >> 6] >> np.uint64(x & 63)) & np.uint64(1))


def initial_tables(n: int, width: int) -> np.ndarray:
    rows = np.arange(1 << n, dtype=np.uint32)
    words = (max(1 << n, 1) + 63) // 64
    table = np.zeros((width, words), dtype=np.uint64)
    for i in range(n):
        table[i] = _pack_bits(((rows >> np.uint32(n - 1 - i)) & 1).astype(np.uint8))
    return table


def _require_valid(c: Circuit):
    problems = validate_circuit(c)
    if problems:
        raise StructuralError(problems)


def simulate(c: Circuit, x: Sequence[int]) -> tuple[int, ...]:
    """Final state of all lines for primary input ``x`` and zeroed ancillae."""
    if len(x) != c.n_primary:
        raise StructuralError(f"input has {len(x)} bits, circuit has {c.n_primary} primary lines")
    state = [int(b) & 1 for b in x] + [0] * (c.width - c.n_primary)
    for g in c.gates:
        if all(state[i] for i in g.controls):
            state[g.target] ^= 1
    return tuple(state)


def propagate_truth_tables(c: Circuit, cap: int = TT_CAP) -> LineFunctionTable:
    if c.n_primary > cap:
        raise ResourceError(f"{c.n_primary} primary inputs exceed the truth-table cap {cap}")
    _require_valid(c)
    table = initial_tables(c.n_primary, c.width)
    kernels.propagate(c.array, table)
    return LineFunctionTable(c.n_primary, table)


class Permutation:
    """Bijection on ``range(2**n_bits)``."""

    def __init__(self, image, n_bits: int | None = None):
        self.image = np.ascontiguousarray(image, dtype=np.int64)
        size = self.image.shape[0]
        self.n_bits = size.bit_length() - 1 if n_bits is None else n_bits
        if size != 1 << self.n_bits:
            raise ValueError(f"image has {size} points, expected {1 << self.n_bits}")
        if not self.is_bijection():
            raise ValueError("image is not a bijection")

    def __len__(self):
        return self.image.shape[0]

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.image, other.image)

    def __repr__(self):
        return f"Permutation(n_bits={self.n_bits}, cycles={self.cycle_count()})"

    def is_bijection(self) -> bool:
        img = self.image
        if img.size and (img.min() < 0 or img.max() >= img.size):
            return False
        return np.unique(img).size == img.size

    def cycle_count(self) -> int:
        return kernels.count_cycles(self.image)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = np.zeros(len(self), dtype=bool)
        out = []
        for start in range(len(self)):
            if seen[start]:
                continue
            cyc = []
            v = start
            while not seen[v]:
                seen[v] = True
                cyc.append(v)
                v = int(self.image[v])
            out.append(tuple(cyc))
        return out


def extract_permutation(c: Circuit, cap: int = PERM_CAP) -> Permutation:
    """Permutation induced on all ``width`` lines (line 0 is the most significant bit)."""
    if c.width > cap:
        raise ResourceError(f"width {c.width} exceeds the permutation cap {cap}")
    _require_valid(c)
    states = np.arange(1 << c.width, dtype=np.uint64)
    kernels.apply_states(c.array, states, c.width)
    return Permutation(states.astype(np.int64), c.width)


def parity(p: Permutation) -> str:
    """``"even"`` or ``"odd"``: a permutation with c cycles on N points has sign (-1)^(N-c)."""
    return "even" if (len(p) - p.cycle_count()) % 2 == 0 else "odd"


@dataclass(frozen=True)
class Verdict:
    passed: bool
    x: tuple[int, ...] | None = None
    expected: tuple[int, ...] | None = None
    got: tuple[int, ...] | None = None

    def __bool__(self):
        return self.passed

    def __str__(self):
        if self.passed:
            return "pass"
        fmt = lambda v: "".join(map(str, v))
        return f"FAIL at x={fmt(self.x)}: expected {fmt(self.expected)}, got {fmt(self.got)}"


def check_realizes(c: Circuit, f: TruthTable, cap: int = TT_CAP) -> Verdict:
    """Check ``f(x) == project(c(x, 0...0))`` through ``c.output_map`` for every x."""
    if f.n != c.n_primary or len(c.output_map) != f.n:
        raise StructuralError(f"table has n={f.n}, circuit has {c.n_primary} inputs and {len(c.output_map)} outputs")
    n = f.n
    if n > cap:
        for x in range(1 << n):
            bits = int_to_bits(x, n)
            state = simulate(c, bits)
            got = tuple(state[line] for line in c.output_map)
            if got != f(bits):
                return Verdict(False, bits, f(bits), got)
        return Verdict(True)
    table = propagate_truth_tables(c, cap)
    bad = np.zeros(1 << n, dtype=bool)
    for j, line in enumerate(c.output_map):
        bad |= table.line(line) != f.output_bit(j)
    if not bad.any():
        return Verdict(True)
    x = int(np.flatnonzero(bad)[0])
    got = tuple(table.bit(line, x) for line in c.output_map)
    return Verdict(False, int_to_bits(x, n), int_to_bits(int(f.values[x]), n), got)
