"""Text formats: ``.rcirc`` circuits, ``.rtt`` truth tables, RevLib ``.real`` export and stats JSON.

All files use 1-based line numbers. ``.rcirc``::

    .width 4
    .inputs 4
    .outputs 1 2 3 4
    C 1 2        # control 1, target 2
    T 1 4 2      # controls 1 and 4, target 2
    N 3
    .end

``.rtt`` lists ``.n <n>`` and then f(x) for x = 0 .. 2^n - 1 as n-bit strings,
x1 / y1 being the leftmost (most significant) bit.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .bounds import BoundsReport
from .core import Circuit, Gate, greedy_layering
from .sim import TruthTable
from .synth import CostReport

GATE_ARITY = {"N": 1, "C": 2, "T": 3}
REAL_HEADER_LINES = 9


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)


def _tokens(text: str):
    """Yield (line_no, [(column, token), ...]) for non-empty lines, comments stripped."""
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in body.split():
            col = body.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield no, toks


def _int(tok, no):
    col, s = tok
    try:
        return int(s)
    except ValueError:
        raise FormatError(f"expected an integer, got {s!r}", no, col) from None


def parse_circuit(text: str) -> Circuit:
    header: dict = {}
    gates: list[Gate] = []
    ended = False
    for no, toks in _tokens(text):
        col, head = toks[0]
        if ended:
            raise FormatError("content after .end", no, col)
        if head.startswith("."):
            key = head[1:]
            if key == "end":
                ended = True
                continue
            if key not in ("width", "inputs", "outputs"):
                raise FormatError(f"unknown directive {head}", no, col)
            if key in header:
                raise FormatError(f"repeated directive {head}", no, col)
            if gates:
                raise FormatError(f"{head} after the first gate", no, col)
            vals = [_int(t, no) for t in toks[1:]]
            if key != "outputs" and len(vals) != 1:
                raise FormatError(f"{head} takes one integer", no, col)
            header[key] = (vals, toks[1:], no)
            continue
        if head not in GATE_ARITY:
            raise FormatError(f"unknown gate {head!r}", no, col)
        missing = [d for d in ("width", "inputs", "outputs") if d not in header]
        if missing:
            raise FormatError(f"missing .{missing[0]} before gates", no, col)
        if len(toks) - 1 != GATE_ARITY[head]:
            raise FormatError(f"{head} takes {GATE_ARITY[head]} line numbers", no, col)
        width = header["width"][0][0]
        lines = []
        for tok in toks[1:]:
            v = _int(tok, no)
            if not 1 <= v <= width:
                raise FormatError(f"line {v} out of range 1..{width}", no, tok[0])
            lines.append(v - 1)
        *ctl, target = lines
        if len(set(ctl)) != len(ctl):
            raise FormatError("duplicate control", no, toks[2][0])
        if target in ctl:
            raise FormatError("target in controls", no, toks[-1][0])
        gates.append(Gate(target, tuple(ctl)))
    for d in ("width", "inputs", "outputs"):
        if d not in header:
            raise FormatError(f"missing .{d}")
    if not ended:
        raise FormatError("missing .end")
    width = header["width"][0][0]
    n = header["inputs"][0][0]
    if width < 0 or not 0 <= n <= width:
        raise FormatError(f".inputs {n} incompatible with .width {width}", header["inputs"][2])
    outs, out_toks, out_no = header["outputs"]
    if len(outs) != n:
        raise FormatError(f".outputs lists {len(outs)} lines, expected {n}", out_no)
    seen = set()
    for v, tok in zip(outs, out_toks):
        if not 1 <= v <= width:
            raise FormatError(f"output line {v} out of range 1..{width}", out_no, tok[0])
        if v in seen:
            raise FormatError(f"duplicate output line {v}", out_no, tok[0])
        seen.add(v)
    return Circuit(width, tuple(gates), n, tuple(v - 1 for v in outs))


def write_circuit(c: Circuit, comments: list[str] | None = None) -> str:
    out = [f"# {line}" for line in comments or []]
    out.append(f".width {c.width}")
    out.append(f".inputs {c.n_primary}")
    out.append(" ".join([".outputs"] + [str(x + 1) for x in c.output_map]))
    for g in c.gates:
        out.append(" ".join([g.kind.symbol] + [str(x + 1) for x in g.lines()]))
    out.append(".end")
    return "\n".join(out) + "\n"


def parse_tt(text: str) -> TruthTable:
    n = None
    rows = []
    ended = False
    for no, toks in _tokens(text):
        col, head = toks[0]
        if ended:
            raise FormatError("content after .end", no, col)
        if head == ".n":
            if n is not None or rows or len(toks) != 2:
                raise FormatError("misplaced or malformed .n", no, col)
            n = _int(toks[1], no)
            if n < 1:
                raise FormatError("n must be at least 1", no, toks[1][0])
            continue
        if head == ".end":
            ended = True
            continue
        if len(toks) != 1:
            raise FormatError("one bit string per row", no, toks[1][0])
        bad = [i for i, ch in enumerate(head) if ch not in "01"]
        if bad:
            raise FormatError(f"bad character {head[bad[0]]!r}", no, col + bad[0])
        if n is None:
            n = len(head)
        if len(head) != n:
            raise FormatError(f"row has {len(head)} bits, expected {n}", no, col)
        rows.append(int(head, 2))
    if n is None:
        raise FormatError("empty truth table")
    if len(rows) != 1 << n:
        raise FormatError(f"expected {1 << n} rows, got {len(rows)}")
    return TruthTable(n, np.array(rows, dtype=np.uint32))


def write_tt(f: TruthTable) -> str:
    if f.n < 1:
        raise FormatError("tables with n = 0 have no row text")
    rows = [format(int(v), f"0{f.n}b") for v in f.values]
    return "\n".join([f".n {f.n}", *rows, ".end"]) + "\n"


def export_real(c: Circuit) -> str:
    """RevLib ``.real`` text; ancilla lines are constant 0 and non-output lines are garbage."""
    names = [f"x{i + 1}" for i in range(c.width)]
    out_of = {line: j for j, line in enumerate(c.output_map)}
    inputs = [names[i] if i < c.n_primary else "0" for i in range(c.width)]
    outputs = [f"y{out_of[i] + 1}" if i in out_of else "g" for i in range(c.width)]
    lines = [
        ".version 1.0",
        f".numvars {c.width}",
        ".variables " + " ".join(names),
        ".inputs " + " ".join(inputs),
        ".outputs " + " ".join(outputs),
        ".constants " + "".join("-" if i < c.n_primary else "0" for i in range(c.width)),
        ".garbage " + "".join("-" if i in out_of else "1" for i in range(c.width)),
        ".begin",
    ]
    for g in c.gates:
        lines.append(f"t{len(g.controls) + 1} " + " ".join(names[x] for x in g.lines()))
    lines.append(".end")
    return "\n".join(lines) + "\n"


def _num(v):
    if isinstance(v, float) and math.isfinite(v) and v.is_integer():
        return int(v)
    return v


def circuit_stats(c: Circuit) -> dict:
    return {
        "n": c.n_primary,
        "q": c.n_ancilla,
        "width": c.width,
        "gates": len(c),
        "depth": greedy_layering(c).depth,
        "by_kind": c.kind_counts(),
        "params": None,
        "predicted": None,
    }


def report_stats(report) -> dict:
    if isinstance(report, Circuit):
        return circuit_stats(report)
    if isinstance(report, CostReport):
        p, pr = report.params, report.predicted
        return {
            "n": p.n,
            "q": report.ancilla,
            "width": report.width,
            "gates": report.gates,
            "depth": report.depth,
            "by_kind": dict(report.by_kind),
            "params": {"k": p.k, "s": p.s, "p": p.p, "mode": p.mode.value, "full_groups": p.full_groups},
            "predicted": {"depth": _num(pr.depth), "gates": _num(pr.gates), "ancilla": _num(pr.ancilla)},
            "stages": {
                name: {"gates": st.gates, "depth": st.depth, "ancilla": st.ancilla}
                for name, st in report.stages.items()
            },
        }
    if isinstance(report, BoundsReport):
        return {
            "n": report.n,
            "q": report.q,
            "width": report.width,
            "r": report.r,
            "L_lower": report.L_lower,
            "D_lower": report.D_lower,
            "D0_lower": report.D0_lower,
            "placements_log2": report.placements_log2,
            "upper": {
                "d3n": {"depth": _num(report.upper_D_3n), "ancilla": _num(report.upper_q_3n)},
                "d2n": {"depth": _num(report.upper_D_2n), "ancilla": _num(report.upper_q_2n)},
            },
            "in_domain": report.in_domain,
            "clamped": report.clamped,
        }
    raise TypeError(f"no stats for {type(report).__name__}")


def write_stats(report) -> str:
    return json.dumps(report_stats(report), indent=2) + "\n"
