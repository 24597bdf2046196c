import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revdepth.bounds import shannon_lower_bounds
from revdepth.core import Circuit, random_circuit
from revdepth.formats import (REAL_HEADER_LINES, FormatError, export_real, parse_circuit, parse_tt, report_stats,
                              write_circuit, write_stats, write_tt)
from revdepth.sim import TruthTable
from revdepth.synth import choose_params, synthesize

from conftest import fig1_circuit


def test_parse_fig1(fig1_text):
    c = parse_circuit(fig1_text)
    assert c == fig1_circuit()
    assert (len(c), c.depth) == (6, 3)


@pytest.mark.parametrize("seed", range(100))
def test_circuit_round_trip(seed):
    rng = np.random.default_rng(seed)
    w = int(rng.integers(1, 9))
    base = random_circuit(w, int(rng.integers(0, 30)), seed)
    n = int(rng.integers(0, w + 1))
    outs = tuple(int(x) for x in rng.permutation(w)[:n])
    c = Circuit(w, base.gates, n, outs)
    assert parse_circuit(write_circuit(c)) == c


@pytest.mark.parametrize("seed", range(100))
def test_tt_round_trip(seed):
    rng = np.random.default_rng(seed)
    f = TruthTable.random(int(rng.integers(1, 9)), rng)
    assert parse_tt(write_tt(f)) == f


def test_tt_rejects_zero_inputs():
    with pytest.raises(FormatError):
        write_tt(TruthTable.constant(0, 0))


def test_tt_header_is_optional():
    assert parse_tt("01\n00\n11\n10\n") == TruthTable(2, [1, 0, 3, 2])


@pytest.mark.parametrize("text,needle", [
    (".width 3\n.inputs 3\n.outputs 1 2 3\nT 1 1 2\n.end\n", "duplicate control"),
    (".width 3\n.inputs 3\n.outputs 1 2 3\nC 2 2\n.end\n", "target in controls"),
    (".width 3\n.inputs 3\n.outputs 1 2 3\nN 4\n.end\n", "out of range"),
    (".width 3\n.inputs 3\n.outputs 1 1 3\n.end\n", "duplicate output line"),
    (".width 3\n.inputs 3\n.outputs 1 2 3\nX 1\n.end\n", "unknown gate"),
    (".width 3\n.inputs 3\n.outputs 1 2 3\nC 1\n.end\n", "takes 2"),
    (".width 3\n.outputs 1 2 3\nN 1\n.end\n", "missing .inputs"),
    (".width 3\n.inputs 3\n.outputs 1 2 3\nN 1\n", "missing .end"),
    (".width 3\n.inputs 2\n.outputs 1 2 3\n.end\n", "expected 2"),
])
def test_circuit_errors(text, needle):
    with pytest.raises(FormatError, match=needle):
        parse_circuit(text)


def test_error_positions():
    with pytest.raises(FormatError) as exc:
        parse_circuit(".width 3\n.inputs 3\n.outputs 1 2 3\nC 1 9\n.end\n")
    assert (exc.value.line, exc.value.column) == (4, 5)


@pytest.mark.parametrize("text,needle", [
    (".n 2\n00\n01\n10\n", "expected 4 rows"),
    (".n 2\n00\n0x\n10\n11\n", "bad character"),
    ("00\n011\n", "expected 2"),
    ("", "empty"),
    (".n 0\n.end\n", "at least 1"),
])
def test_tt_errors(text, needle):
    with pytest.raises(FormatError, match=needle):
        parse_tt(text)


def test_export_real(fig1):
    text = export_real(fig1)
    lines = text.splitlines()
    assert len(lines) == len(fig1) + REAL_HEADER_LINES
    assert lines[lines.index(".begin") + 1] == "t2 x1 x2"
    assert "t3 x1 x4 x2" in lines
    assert lines[-1] == ".end"


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 40), st.integers(0, 2**32 - 1))
def test_export_real_line_count(w, n_gates, seed):
    c = random_circuit(w, n_gates, seed)
    assert len(export_real(c).splitlines()) == n_gates + REAL_HEADER_LINES


def test_export_real_marks_ancilla():
    c = Circuit(3, (), 1, (2,))
    lines = export_real(c).splitlines()
    assert ".constants -00" in lines and ".garbage 11-" in lines


def test_stats(fig1):
    d = json.loads(write_stats(fig1))
    assert (d["gates"], d["depth"], d["by_kind"]) == (6, 3, {"N": 3, "C": 2, "T": 1})
    f = TruthTable.random(8, np.random.default_rng(0))
    _, rep = synthesize(f, choose_params(8))
    d = json.loads(write_stats(rep))
    assert d["predicted"] == {"depth": 21, "gates": 819.2, "ancilla": 409.6}
    assert d["params"] == {"k": 3, "s": 5, "p": 2, "mode": "d3n", "full_groups": False}
    assert set(d["stages"]) == {"S1", "S2", "S3", "S4", "S5", "S6"}
    b = report_stats(shannon_lower_bounds(4))
    assert b["L_lower"] == 4.0 and b["upper"]["d3n"] == {"depth": 12, "ancilla": 16}
    with pytest.raises(TypeError):
        report_stats(object())
