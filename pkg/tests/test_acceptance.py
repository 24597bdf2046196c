"""Acceptance criteria AC1-AC11, one test each, each printing a PASS/FAIL line.

Timings start after the session fixture has compiled the JIT kernels.
"""
import math
import statistics
import time

import numpy as np
import pytest

from revdepth.bounds import census_upper_bound, circuit_count_upto, gate_alphabet_size, shannon_lower_bounds
from revdepth.core import Circuit, all_gates, ccnot, greedy_layering, random_circuit
from revdepth.formats import REAL_HEADER_LINES, export_real, parse_circuit, parse_tt, write_circuit, write_tt
from revdepth.gadgets import LineAllocator, copy_tree, minterm_family, xor_fold
from revdepth.sim import TruthTable, check_realizes, extract_permutation, parity, propagate_truth_tables
from revdepth.synth import choose_params, synthesize

from conftest import FIG1_TEXT, brute_min_depth, fig1_circuit


def _report(capsys, name, ok, detail, elapsed, budget):
    ok = bool(ok) and elapsed < budget
    with capsys.disabled():
        print(f"\n{name} {'PASS' if ok else 'FAIL'} {detail} ({elapsed:.3g}s, budget {budget:g}s)")
    assert ok, f"{name}: {detail}, {elapsed:.3g}s against {budget:g}s"


def _corpus(n):
    rng = np.random.default_rng(1000 + n)
    fixed = [TruthTable.identity(n), TruthTable.complement(n), TruthTable.constant(n, 0), TruthTable.bit_reversal(n)]
    return fixed + [TruthTable.random(n, rng) for _ in range(25)]


def test_ac1_fig1(capsys):
    def once():
        c = parse_circuit(FIG1_TEXT)
        return c, len(c), greedy_layering(c).depth

    once()
    times = []
    for _ in range(5):
        t0 = time.perf_counter()
        c, L, D = once()
        times.append(time.perf_counter() - t0)
    ok = (L, D) == (6, 3) and c == fig1_circuit()
    _report(capsys, "AC1", ok, f"L={L} D={D}", statistics.median(times), 1e-3)


def test_ac2_gate_census(capsys):
    t0 = time.perf_counter()
    bad = [w for w in range(2, 7) if gate_alphabet_size(w) != len(set(all_gates(w)))]
    _report(capsys, "AC2", not bad, f"mismatches at w={bad}", time.perf_counter() - t0, 1.0)


def test_ac3_counting_inequality(capsys):
    t0 = time.perf_counter()
    bad = [(w, s) for w in range(2, 6) for s in range(7) if circuit_count_upto(w, s) > census_upper_bound(w, s)]
    _report(capsys, "AC3", not bad, f"violations {bad}", time.perf_counter() - t0, 1.0)


def test_ac4_synthesis_correctness(capsys):
    t0 = time.perf_counter()
    failures, total = [], 0
    for n in range(3, 9):
        for idx, f in enumerate(_corpus(n)):
            for mode in ("d3n", "d2n"):
                c, _ = synthesize(f, choose_params(n, mode))
                total += 1
                if not check_realizes(c, f):
                    failures.append((n, idx, mode))
    _report(capsys, "AC4", not failures, f"{total - len(failures)}/{total} realize", time.perf_counter() - t0, 180)


def test_ac5_depth_budget(capsys):
    t0 = time.perf_counter()
    stage_bad, env_bad, worst = [], [], 0.0
    for n in range(3, 9):
        for idx, f in enumerate(_corpus(n)):
            for mode in ("d3n", "d2n"):
                _, rep = synthesize(f, choose_params(n, mode))
                if rep.depth > rep.stage_depth_bound():
                    stage_bad.append((n, idx, mode))
    for n in range(8, 13):
        params = choose_params(n, "d3n", "log2")
        envelope = 2 * n + params.s + 2 * math.ceil(math.log2(n)) + 12
        for idx, f in enumerate(_corpus(n)[:8]):
            _, rep = synthesize(f, params)
            worst = max(worst, rep.depth / envelope)
            if rep.depth > rep.stage_depth_bound():
                stage_bad.append((n, idx, "d3n"))
            if rep.depth > envelope:
                env_bad.append((n, idx, rep.depth, envelope))
    detail = f"stage violations {len(stage_bad)}, envelope violations {len(env_bad)}, max D/envelope {worst:.3f}"
    _report(capsys, "AC5", not stage_bad and not env_bad, detail, time.perf_counter() - t0, 120)


def test_ac6_resource_trend(capsys):
    t0 = time.perf_counter()
    worst_q = worst_L = 0.0
    lazy_bad = []
    for n in range(8, 13):
        lazy_p = choose_params(n, "d3n")
        full_p = choose_params(n, "d3n", full_groups=True)
        q_ref = n * 2**n / full_p.s
        L_ref = n * 2 ** (n + 1) / full_p.s
        for idx, f in enumerate(_corpus(n)[:6]):
            _, full = synthesize(f, full_p)
            _, lazy = synthesize(f, lazy_p)
            worst_q = max(worst_q, full.ancilla / q_ref)
            worst_L = max(worst_L, full.gates / L_ref)
            if lazy.ancilla > full.ancilla or lazy.gates > full.gates:
                lazy_bad.append((n, idx))
    ok = worst_q <= 1.5 and worst_L <= 1.5 and not lazy_bad
    detail = f"max q ratio {worst_q:.3f}, max L ratio {worst_L:.3f}, lazy above full {len(lazy_bad)}"
    _report(capsys, "AC6", ok, detail, time.perf_counter() - t0, 120)


def test_ac7_lemma_suite(capsys):
    t0 = time.perf_counter()
    problems = []
    for k in range(2, 6):
        alloc = LineAllocator(k)
        res = minterm_family(list(range(k)), alloc)
        c = Circuit(k + alloc.used, tuple(res.gates), k)
        t = propagate_truth_tables(c)
        xs = np.arange(1 << k)
        if any(not np.array_equal(t.line(line), xs == sigma) for sigma, line in res.outputs.items()):
            problems.append(f"minterm k={k} wrong")
        if c.depth > 2 * k or len(c) > 4 * 2**k or res.ancilla_used > 4 * 2**k:
            problems.append(f"minterm k={k} cost")
    for k in range(1, 65):
        res = copy_tree(0, k, LineAllocator(1))
        if len(res.gates) != k or res.circuit(k + 1).depth > math.ceil(math.log2(k)) + 1:
            problems.append(f"copy k={k}")
    for m in range(1, 65):
        res = xor_fold(list(range(m)))
        depth = res.circuit(m).depth
        if len(res.gates) != m - 1 or depth != math.ceil(math.log2(m)):
            problems.append(f"fold m={m}")
    _report(capsys, "AC7", not problems, f"problems {problems}", time.perf_counter() - t0, 10)


def test_ac8_parity(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    odd = []
    for seed in range(200):
        w = int(rng.choice([4, 5, 6]))
        c = random_circuit(w, int(rng.integers(1, 40)), seed)
        if parity(extract_permutation(c)) != "even":
            odd.append(seed)
    single = parity(extract_permutation(Circuit(3, (ccnot(0, 1, 2),))))
    ok = not odd and single == "odd"
    _report(capsys, "AC8", ok, f"odd among 200: {len(odd)}, width-3 CCNOT {single}", time.perf_counter() - t0, 10)


def test_ac9_depth_relation(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    bad = []
    for seed in range(500):
        w = int(rng.integers(1, 7))
        c = random_circuit(w, int(rng.integers(0, 9)), seed)
        L, D = len(c), greedy_layering(c).depth
        if not (math.ceil(L / w) <= D <= L) or D != brute_min_depth(c):
            bad.append(seed)
    _report(capsys, "AC9", not bad, f"violations {len(bad)}/500", time.perf_counter() - t0, 30)


def test_ac10_bounds(capsys):
    t0 = time.perf_counter()
    rep = shannon_lower_bounds(4, 0)
    spot = abs(rep.L_lower - 4.0) <= 1e-9 and abs(rep.D_lower - 1.0) <= 1e-9
    mono_bad = []
    for n in range(4, 13):
        qs = [0, 1] + [2**e for e in range(1, n + 1)]
        vals = [shannon_lower_bounds(n, q).D_lower for q in qs]
        if any(b > a for a, b in zip(vals, vals[1:])):
            mono_bad.append(n)
    detail = f"L_lower={rep.L_lower} D_lower={rep.D_lower}, monotonicity breaks {mono_bad}"
    _report(capsys, "AC10", spot and not mono_bad, detail, time.perf_counter() - t0, 1.0)


def test_ac11_round_trips(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    bad = []
    for seed in range(100):
        w = int(rng.integers(1, 9))
        c = random_circuit(w, int(rng.integers(0, 40)), seed)
        if parse_circuit(write_circuit(c)) != c:
            bad.append(("circuit", seed))
        if len(export_real(c).splitlines()) != len(c) + REAL_HEADER_LINES:
            bad.append(("real", seed))
        f = TruthTable.random(int(rng.integers(1, 9)), rng)
        if parse_tt(write_tt(f)) != f:
            bad.append(("tt", seed))
    _report(capsys, "AC11", not bad, f"mismatches {bad}", time.perf_counter() - t0, 5)
