"""Depth-oriented synthesis of an arbitrary map Z_2^n -> Z_2^n with ancillary lines.

The map is split on its last n-k inputs: every output bit is the XOR over
suffix assignments i of (suffix minterm i) AND f_{i,j}(first k inputs).
Each f_{i,j} is in turn an XOR of one function per group of s prefix
minterms. Six stages build this:

    S1  minterms of the first k inputs
    S2  XOR-subset functions of each minterm group
    S3  copies of those functions and folds into every f_{i,j}
    S4  minterms of the last n-k inputs
    S5  copies of every suffix minterm
    S6  AND of f_{i,j} with suffix minterm i, summed per output

S1-S3 and S4-S5 touch disjoint lines; gates are emitted in ASAP layer order
so the greedy depth sees both chains running side by side.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import Circuit, Gate, ccnot, greedy_layering
from .gadgets import FanOut, LineAllocator, asap_depth, asap_layers, minterm_family, xor_fold_gates, \
    xor_subset_family
from .sim import TruthTable, check_realizes

SYNTH_CAP = 12
STAGES = ("S1", "S2", "S3", "S4", "S5", "S6")


class Mode(enum.Enum):
    DEPTH_3N = "d3n"
    DEPTH_2N = "d2n"
    MANUAL = "manual"


def phi_value(n: int, phi: str | float = "log2") -> float:
    """Growth function value: ``"log2"`` is ceil(log2 n), ``"const=c"`` or a number is c."""
    if isinstance(phi, (int, float)):
        value = float(phi)
    elif phi == "log2":
        value = float(max(1, math.ceil(math.log2(n))))
    elif isinstance(phi, str) and phi.startswith("const="):
        value = float(phi.split("=", 1)[1])
    else:
        raise ValueError(f"unknown phi setting {phi!r}")
    if value <= 0:
        raise ValueError("phi must be positive")
    return value


@dataclass(frozen=True)
class SynthParams:
    n: int
    k: int
    mode: Mode = Mode.MANUAL
    phi: float | None = None
    min_group_ratio: float = 2.0
    full_groups: bool = False
    # terms summed into one S6 accumulator (2 = plain pairs)
    fan_in: int = 4
    # reads allowed per holder in minterm/XOR-family cross products
    reuse: int = 2
    # reads allowed per holder of a group function used as a fold operand in S3
    fold_reuse: int = 4
    warnings: tuple[str, ...] = ()

    @property
    def s(self) -> int:
        return self.n - self.k

    @property
    def p(self) -> int:
        return -(-(1 << self.k) // self.s)

    def groups(self) -> list[tuple[int, int]]:
        size = 1 << self.k
        return [(a, min(a + self.s, size)) for a in range(0, size, self.s)]

    def validate(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 1 <= self.k < self.n:
            raise ValueError(f"k={self.k} outside 1..{self.n - 1}")
        if self.fan_in < 1 or self.reuse < 1 or self.fold_reuse < 1:
            raise ValueError("fan_in, reuse and fold_reuse must be positive")
        return self


def choose_params(n: int, mode: Mode | str = Mode.DEPTH_3N, phi: str | float = "log2", k: int | None = None,
                  **options) -> SynthParams:
    """Split point for the requested trade-off.

    DEPTH_3N takes k = ceil(n/phi) (about 2**n ancillae), DEPTH_2N takes
    k = n - ceil(n/phi) (about phi * 2**n ancillae). An infeasible k is clamped
    into 1..n-1 and the clamp is recorded in ``warnings``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    mode = Mode(mode)
    notes = []
    phi_v = None
    if mode is Mode.MANUAL:
        if k is None:
            raise ValueError("manual mode needs k")
        chosen = int(k)
    else:
        phi_v = phi_value(n, phi)
        split = math.ceil(n / phi_v)
        chosen = split if mode is Mode.DEPTH_3N else n - split
        if k is not None:
            notes.append(f"explicit k={k} overrides computed k={chosen}")
            chosen = int(k)
    clamped = min(max(chosen, 1), n - 1)
    if clamped != chosen:
        notes.append(f"k={chosen} clamped to {clamped}")
    params = SynthParams(n=n, k=clamped, mode=mode, phi=phi_v, **options)
    if mode is not Mode.MANUAL and (1 << params.k) / params.s < params.min_group_ratio:
        notes.append(f"2^k/s = {(1 << params.k) / params.s:.3g} below min_group_ratio {params.min_group_ratio}")
    return replace(params, warnings=tuple(notes)).validate()


def suffix_value(i: int, width: int) -> int:
    """Row bits of suffix assignment ``i``; ``a_{k+1}`` is the low bit of i but the high bit of the row."""
    out = 0
    for _ in range(width):
        out = (out << 1) | (i & 1)
        i >>= 1
    return out


@dataclass
class CoordinatePlan:
    """Group masks of every coordinate function.

    ``masks[i, j, t]`` selects, bit b for minterm ``groups[t][0] + b``, the
    prefix minterms on which output j is 1 when the suffix assignment is i.
    """

    params: SynthParams
    groups: list[tuple[int, int]]
    masks: np.ndarray  # (2**(n-k), n, p) int64

    def minterms(self, i: int, j: int) -> set[int]:
        out = set()
        for t, (a, b) in enumerate(self.groups):
            m = int(self.masks[i, j, t])
            out.update(a + bit for bit in range(b - a) if (m >> bit) & 1)
        return out

    def demanded(self, t: int) -> set[int]:
        return set(np.unique(self.masks[:, :, t]).tolist()) - {0}


def plan_coordinates(f: TruthTable, params: SynthParams) -> CoordinatePlan:
    n, k = params.n, params.k
    if f.n != n:
        raise ValueError(f"table has n={f.n}, params have n={n}")
    rest = n - k
    by_prefix = f.values.reshape(1 << k, 1 << rest).astype(np.int64)
    groups = params.groups()
    masks = np.zeros((1 << rest, n, len(groups)), dtype=np.int64)
    for i in range(1 << rest):
        col = by_prefix[:, suffix_value(i, rest)]
        for j in range(n):
            bits = (col >> (n - 1 - j)) & 1
            for t, (a, b) in enumerate(groups):
                masks[i, j, t] = int(np.dot(bits[a:b], 1 << np.arange(b - a)))
    return CoordinatePlan(params, groups, masks)


@dataclass(frozen=True)
class StageCost:
    gates: int
    depth: int
    ancilla: int


@dataclass(frozen=True)
class PredictedCosts:
    depth: float
    gates: float
    ancilla: float
    stages: dict = field(default_factory=dict)


def predicted_costs(params: SynthParams) -> PredictedCosts:
    """Leading-order totals 2n+s, n 2^(n+1)/s, n 2^n/s and the per-stage table."""
    n, k, s, p = params.n, params.k, params.s, params.p
    r = 1 << (n - k)
    stages = {
        "S1": StageCost(3 * 2**k, k, 3 * 2**k),
        "S2": StageCost(3 * p * 2**s, s, p * 2 ** (s + 1)),
        "S3": StageCost((2 * p - 1) * n * r, n - k + math.log2(p), p * n * r),
        "S4": StageCost(3 * r, n - k, 3 * r),
        "S5": StageCost((n - 1) * r, math.log2(n), (n - 1) * r),
        "S6": StageCost(3 * n * r / 2, n - k, n * r / 2),
    }
    return PredictedCosts(float(2 * n + s), n * 2.0 ** (n + 1) / s, n * 2.0**n / s, stages)


@dataclass
class CostReport:
    params: SynthParams
    gates: int
    depth: int
    ancilla: int
    width: int
    by_kind: dict
    stages: dict
    predicted: PredictedCosts

    @property
    def n(self) -> int:
        return self.params.n

    def stage_depth_bound(self) -> int:
        d = {name: self.stages[name].depth for name in STAGES}
        return max(d["S1"] + d["S2"] + d["S3"], d["S4"] + d["S5"]) + d["S6"]


class SynthesisError(RuntimeError):
    pass


def synthesize(f: TruthTable, params: SynthParams | None = None, cap: int = SYNTH_CAP,
               verify: bool = False) -> tuple[Circuit, CostReport]:
    """Build a circuit on n + q lines realizing ``f`` through its output map."""
    n = f.n
    if n > cap:
        raise ValueError(f"n={n} exceeds the synthesis cap {cap}")
    if params is None:
        params = choose_params(n)
    if params.n != n:
        raise ValueError(f"params are for n={params.n}, table has n={n}")
    params.validate()
    k, rest, r = params.k, n - params.k, params.fan_in
    plan = plan_coordinates(f, params)
    primary = set(range(n))
    alloc = LineAllocator(n)
    emitted: dict[str, list[Gate]] = {name: [] for name in STAGES}
    ancilla: dict[str, int] = {}

    def stage(name, mark):
        ancilla[name] = alloc.used - mark

    # S1
    mark = alloc.used
    s1 = minterm_family(list(range(k)), alloc, params.reuse)
    emitted["S1"] = s1.gates
    stage("S1", mark)

    # S2
    mark = alloc.used
    group_fn: list[dict[int, int]] = []
    for t, (a, b) in enumerate(plan.groups):
        lines = [s1.outputs[sigma] for sigma in range(a, b)]
        want = None if params.full_groups else plan.demanded(t)
        if want is not None and not want:
            group_fn.append({})
            continue
        res = xor_subset_family(lines, want, alloc, params.reuse, protected=primary)
        emitted["S2"].extend(res.gates)
        group_fn.append(res.outputs)
    stage("S2", mark)

    # S3: decide every use of every group function, then fan out and fold
    mark = alloc.used
    n_suffix = 1 << rest
    s6_round = lambda i, j: (i + j) % r
    uses: dict[tuple[int, int], dict] = {}
    coord: dict[tuple[int, int], object] = {}
    folds = []

    def use(key):
        return uses.setdefault(key, {"rounds": [], "ctl": [], "consumed": []})

    for i in range(n_suffix):
        for j in range(n):
            terms = [(t, int(m)) for t, m in enumerate(plan.masks[i, j]) if m]
            if not terms:
                coord[i, j] = None
            elif len(terms) == 1:
                u = use(terms[0])
                u["rounds"].append(s6_round(i, j))
                u["ctl"].append(("coord", i, j))
                coord[i, j] = ("pending", i, j)
            else:
                slots = [None] * len(terms)
                for pos, key in enumerate(terms):
                    u = use(key)
                    if pos % 2 == 0:
                        u["consumed"].append((len(folds), pos))
                    else:
                        u["rounds"].append(len(u["rounds"]) % params.fold_reuse)
                        u["ctl"].append(("fold", len(folds), pos))
                folds.append(((i, j), slots))
    for key in sorted(uses):
        u = uses[key]
        src = group_fn[key[0]][key[1]]
        fan = FanOut(src, u["rounds"], len(u["consumed"]), alloc, src in primary)
        emitted["S3"].extend(fan.gates)
        for tag, holder in zip(u["ctl"], fan.control_holders):
            if tag[0] == "coord":
                coord[tag[1], tag[2]] = holder
            else:
                folds[tag[1]][1][tag[2]] = holder
        for (fold_idx, pos), holder in zip(u["consumed"], fan.consumed_holders):
            folds[fold_idx][1][pos] = holder
    for (i, j), slots in folds:
        gates, acc = xor_fold_gates(slots)
        emitted["S3"].extend(gates)
        coord[i, j] = acc
    stage("S3", mark)

    # S4
    mark = alloc.used
    s4 = minterm_family(list(range(k, n)), alloc, params.reuse)
    emitted["S4"] = s4.gates
    stage("S4", mark)

    # S5
    mark = alloc.used
    m_holder: dict[tuple[int, int], int] = {}
    for i in range(n_suffix):
        js = [j for j in range(n) if coord[i, j] is not None]
        src = s4.outputs[suffix_value(i, rest)]
        fan = FanOut(src, [s6_round(i, j) for j in js], 0, alloc, src in primary)
        emitted["S5"].extend(fan.gates)
        m_holder.update({(i, j): h for j, h in zip(js, fan.control_holders)})
    stage("S5", mark)

    # S6
    mark = alloc.used
    accs: dict[int, list[int]] = {j: [] for j in range(n)}
    products = []
    for j in range(n):
        for base in range(0, n_suffix, r):
            block = [i for i in range(base, min(base + r, n_suffix)) if coord[i, j] is not None]
            if not block:
                continue
            acc = alloc.one()
            accs[j].append(acc)
            products.extend((s6_round(i, j), j, i, acc) for i in block)
    products.sort()
    emitted["S6"].extend(ccnot(coord[i, j], m_holder[i, j], acc) for _, j, i, acc in products)
    output_map = []
    for j in range(n):
        if not accs[j]:
            output_map.append(alloc.one())
            continue
        gates, out = xor_fold_gates(accs[j])
        emitted["S6"].extend(gates)
        output_map.append(out)
    stage("S6", mark)

    flat = [g for name in STAGES for g in emitted[name]]
    ordered = tuple(g for layer in asap_layers(flat) for g in layer)
    circuit = Circuit(n + alloc.used, ordered, n, tuple(output_map))
    stages = {name: StageCost(len(emitted[name]), asap_depth(emitted[name]), ancilla[name]) for name in STAGES}
    report = CostReport(
        params=params,
        gates=len(circuit),
        depth=greedy_layering(circuit).depth,
        ancilla=circuit.n_ancilla,
        width=circuit.width,
        by_kind=circuit.kind_counts(),
        stages=stages,
        predicted=predicted_costs(params),
    )
    if verify:
        verdict = check_realizes(circuit, f)
        if not verdict:
            raise SynthesisError(f"synthesized circuit does not realize the table: {verdict}")
    return circuit, report
