"""Time each hot kernel under the numpy and numba backends.

    python benchmarks/bench_kernels.py [--gates 20000] [--width 16] [--repeat 5]
"""
import argparse
import time

import numpy as np

from revdepth import kernels
from revdepth.core import random_circuit
from revdepth.sim import initial_tables


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gates", type=int, default=20000)
    ap.add_argument("--width", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    c = random_circuit(args.width, args.gates, seed=1)
    arr, w = c.array, c.width
    n = min(w, 14)
    states = np.arange(1 << n, dtype=np.uint64)
    image = np.random.default_rng(0).permutation(1 << 18).astype(np.int64)
    cases = {
        "greedy_blocks": lambda k: k["greedy_blocks"](arr, w),
        "asap_levels": lambda k: k["asap_levels"](arr, w),
        "propagate": lambda k: k["propagate"](arr, initial_tables(n, w)),
        "apply_states": lambda k: k["apply_states"](arr[:2000], states, w),
        "count_cycles": lambda k: k["count_cycles"](image),
    }
    backends = {"numpy": kernels.NUMPY_KERNELS}
    if kernels.NUMBA_KERNELS is not None:
        backends["numba"] = kernels.NUMBA_KERNELS
    print(f"width={w} gates={args.gates} n={n}")
    print(f"{'kernel':<14}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, case in cases.items():
        t = {b: best_of(lambda: case(k), args.repeat) for b, k in backends.items()}
        row = f"{name:<14}" + "".join(f"{t[b] * 1e3:>10.2f}ms" for b in backends)
        if "numba" in t:
            row += f"{t['numpy'] / t['numba']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
