"""Hot loops over packed gate arrays.

A circuit is packed as an ``int64`` array of shape ``(L, 3)`` holding
``(target, control1, control2)`` per gate with ``-1`` for an absent control.
Every kernel has a plain-numpy implementation; when numba is enabled (see
:mod:`revdepth._backend`) the loop versions are JIT-compiled and used instead.
"""
import numpy as np

from ._backend import HAVE_NUMBA, njit

ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


# -- greedy contiguous layering --------------------------------------------

def _greedy_blocks_loop(gates, width):
    out = np.empty(gates.shape[0], dtype=np.int64)
    stamp = np.full(width, -1, dtype=np.int64)
    block = -1
    for g in range(gates.shape[0]):
        clash = block < 0
        for c in range(3):
            line = gates[g, c]
            if line >= 0 and stamp[line] == block:
                clash = True
        if clash:
            block += 1
        for c in range(3):
            line = gates[g, c]
            if line >= 0:
                stamp[line] = block
        out[g] = block
    return out


def _greedy_blocks_numpy(gates, width):
    out = np.empty(gates.shape[0], dtype=np.int64)
    stamp = [-1] * width
    block = -1
    for g, row in enumerate(gates.tolist()):
        lines = [x for x in row if x >= 0]
        if block < 0 or any(stamp[x] == block for x in lines):
            block += 1
        for x in lines:
            stamp[x] = block
        out[g] = block
    return out


# -- ASAP levels ----------------------------------------------------------

def _asap_levels_loop(gates, width):
    out = np.empty(gates.shape[0], dtype=np.int64)
    ready = np.zeros(width, dtype=np.int64)
    for g in range(gates.shape[0]):
        lvl = 0
        for c in range(3):
            line = gates[g, c]
            if line >= 0 and ready[line] > lvl:
                lvl = ready[line]
        for c in range(3):
            line = gates[g, c]
            if line >= 0:
                ready[line] = lvl + 1
        out[g] = lvl
    return out


def _asap_levels_numpy(gates, width):
    out = np.empty(gates.shape[0], dtype=np.int64)
    ready = [0] * width
    for g, row in enumerate(gates.tolist()):
        lines = [x for x in row if x >= 0]
        lvl = max(ready[x] for x in lines)
        for x in lines:
            ready[x] = lvl + 1
        out[g] = lvl
    return out


# -- bit-parallel truth-table propagation ---------------------------------

def _propagate_loop(gates, table):
    words = table.shape[1]
    ones = np.uint64(0xFFFFFFFFFFFFFFFF)
    for g in range(gates.shape[0]):
        t = gates[g, 0]
        c1 = gates[g, 1]
        c2 = gates[g, 2]
        for w in range(words):
            m = ones
            if c1 >= 0:
                m &= table[c1, w]
            if c2 >= 0:
                m &= table[c2, w]
            table[t, w] ^= m
    return table


def _propagate_numpy(gates, table):
    for t, c1, c2 in gates.tolist():
        if c1 < 0:
            np.bitwise_not(table[t], out=table[t])
        elif c2 < 0:
            table[t] ^= table[c1]
        else:
            table[t] ^= table[c1] & table[c2]
    return table


# -- full-state evaluation (line 0 is the most significant bit) ------------

def _apply_states_loop(gates, states, width):
    one = np.uint64(1)
    for g in range(gates.shape[0]):
        t = np.uint64(width - 1 - gates[g, 0])
        c1 = gates[g, 1]
        c2 = gates[g, 2]
        s1 = np.uint64(width - 1 - c1) if c1 >= 0 else np.uint64(0)
        s2 = np.uint64(width - 1 - c2) if c2 >= 0 else np.uint64(0)
        for i in range(states.shape[0]):
            v = states[i]
            m = one
            if c1 >= 0:
                m &= v >> s1
            if c2 >= 0:
                m &= v >> s2
            states[i] = v ^ ((m & one) << t)
    return states


def _apply_states_numpy(gates, states, width):
    one = np.uint64(1)
    for t, c1, c2 in gates.tolist():
        flip = np.uint64(1) << np.uint64(width - 1 - t)
        if c1 < 0:
            states ^= flip
            continue
        m = states >> np.uint64(width - 1 - c1)
        if c2 >= 0:
            m = m & (states >> np.uint64(width - 1 - c2))
        states ^= (m & one) << np.uint64(width - 1 - t)
    return states


# -- cycle count of a permutation ----------------------------------------

def _count_cycles_loop(image):
    n = image.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        v = start
        while not seen[v]:
            seen[v] = True
            v = image[v]
    return cycles


def _count_cycles_numpy(image):
    # pointer jumping: after ceil(log2 n) rounds every point knows its cycle minimum
    n = image.shape[0]
    if n == 0:
        return 0
    label = np.arange(n, dtype=np.int64)
    jump = image.astype(np.int64)
    for _ in range(max(1, int(n - 1).bit_length())):
        label = np.minimum(label, label[jump])
        jump = jump[jump]
    return int(np.count_nonzero(label == np.arange(n)))


NUMPY_KERNELS = {
    "greedy_blocks": _greedy_blocks_numpy,
    "asap_levels": _asap_levels_numpy,
    "propagate": _propagate_numpy,
    "apply_states": _apply_states_numpy,
    "count_cycles": _count_cycles_numpy,
}

if HAVE_NUMBA:
    NUMBA_KERNELS = {
        "greedy_blocks": njit(_greedy_blocks_loop),
        "asap_levels": njit(_asap_levels_loop),
        "propagate": njit(_propagate_loop),
        "apply_states": njit(_apply_states_loop),
        "count_cycles": njit(_count_cycles_loop),
    }
    _ACTIVE = NUMBA_KERNELS
else:
    NUMBA_KERNELS = None
    _ACTIVE = NUMPY_KERNELS


def greedy_blocks(gates: np.ndarray, width: int) -> np.ndarray:
    """Block index of every gate under greedy contiguous layering."""
    if gates.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    return _ACTIVE["greedy_blocks"](gates, width)


def asap_levels(gates: np.ndarray, width: int) -> np.ndarray:
    """Earliest layer of every gate given that gates sharing a line keep their order."""
    if gates.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    return _ACTIVE["asap_levels"](gates, width)


def propagate(gates: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Apply gates in place to a ``(width, words)`` uint64 table of packed line functions."""
    if gates.shape[0] == 0:
        return table
    return _ACTIVE["propagate"](gates, table)


def apply_states(gates: np.ndarray, states: np.ndarray, width: int) -> np.ndarray:
    """Apply gates in place to an array of packed ``width``-bit states."""
    if gates.shape[0] == 0:
        return states
    return _ACTIVE["apply_states"](gates, states, width)


def count_cycles(image: np.ndarray) -> int:
    return int(_ACTIVE["count_cycles"](image))
