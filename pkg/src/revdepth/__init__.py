"""Reversible circuits over NOT, CNOT and 2-CNOT: depth, synthesis with ancillae, and bounds."""
from ._backend import backend_name
from .bounds import BoundsReport, circuit_count_upto, gate_alphabet_size, shannon_lower_bounds
from .core import (Circuit, Gate, GateKind, LayerPartition, StructuralError, apply_gate, ccnot, cnot,
                   gate_support, greedy_layering, not_gate, random_circuit, relocate, validate_circuit)
from .formats import export_real, parse_circuit, parse_tt, write_circuit, write_stats, write_tt
from .sim import (LineFunctionTable, Permutation, ResourceError, TruthTable, check_realizes,
                  extract_permutation, parity, propagate_truth_tables, simulate)
from .synth import CostReport, Mode, SynthParams, choose_params, plan_coordinates, predicted_costs, synthesize

__version__ = "0.1.0"
