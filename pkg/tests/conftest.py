import itertools

import numpy as np
import pytest

from revdepth import kernels
from revdepth.core import Circuit, ccnot, cnot, not_gate
from revdepth.formats import parse_circuit

FIG1_TEXT = """\
.width 4
.inputs 4
.outputs 1 2 3 4
C 1 2
C 3 1
N 2
N 4
T 1 4 2
N 3
.end
"""


def fig1_circuit():
    # C_{1;2} * C_{3;1} * N_2 * N_4 * C_{1,4;2} * N_3, 0-based
    return Circuit(4, (cnot(0, 1), cnot(2, 0), not_gate(1), not_gate(3), ccnot(0, 3, 1), not_gate(2)))


def brute_min_depth(circuit):
    """Minimum block count over every contiguous cut pattern with line-disjoint blocks."""
    gates = circuit.gates
    if not gates:
        return 0
    best = len(gates)
    for cuts in itertools.product((0, 1), repeat=len(gates) - 1):
        blocks, cur = [], [gates[0]]
        for g, cut in zip(gates[1:], cuts):
            if cut:
                blocks.append(cur)
                cur = []
            cur.append(g)
        blocks.append(cur)
        ok = all(
            not (a.support & b.support)
            for blk in blocks
            for i, a in enumerate(blk)
            for b in blk[i + 1:]
        )
        if ok:
            best = min(best, len(blocks))
    return best


def brute_state_eval(circuit, value):
    """Apply gates to a width-bit integer, line 0 = most significant bit."""
    w = circuit.width
    bits = [(value >> (w - 1 - i)) & 1 for i in range(w)]
    for g in circuit.gates:
        if all(bits[c] for c in g.controls):
            bits[g.target] ^= 1
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


@pytest.fixture
def fig1():
    return fig1_circuit()


@pytest.fixture
def fig1_text():
    return FIG1_TEXT


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile JIT kernels once so timing checks exclude compilation
    c = parse_circuit(FIG1_TEXT)
    kernels.greedy_blocks(c.array, c.width)
    kernels.asap_levels(c.array, c.width)
    kernels.propagate(c.array, np.zeros((4, 1), dtype=np.uint64))
    kernels.apply_states(c.array, np.arange(16, dtype=np.uint64), 4)
    kernels.count_cycles(np.arange(4, dtype=np.int64))
