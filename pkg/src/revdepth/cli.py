"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .bounds import shannon_lower_bounds
from .core import Circuit, greedy_layering, random_circuit
from .gadgets import LineAllocator, minterm_family
from .sim import PERM_CAP, ResourceError, check_realizes, extract_permutation, parity, simulate
from .synth import SYNTH_CAP, choose_params, synthesize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _load_circuit(path) -> Circuit:
    return formats.parse_circuit(_read(path))


def cmd_synth(args, out):
    f = formats.parse_tt(_read(args.tt))
    if f.n > SYNTH_CAP:
        raise ResourceError(f"n={f.n} exceeds the synthesis cap {SYNTH_CAP}")
    if f.n < 2:
        raise UsageError("synthesis needs n >= 2")
    params = choose_params(f.n, args.mode, args.phi, k=args.k, full_groups=args.full_groups)
    for note in params.warnings:
        print(f"warning: {note}", file=sys.stderr)
    circuit, report = synthesize(f, params)
    verdict = check_realizes(circuit, f)
    if not verdict:
        print(f"self-verification failed: {verdict}", file=sys.stderr)
        return EXIT_FAIL
    _write(args.output, formats.write_circuit(circuit))
    if args.stats:
        _write(args.stats, formats.write_stats(report))
    if args.json:
        out.write(formats.write_stats(report))
    else:
        pr = report.predicted
        print(f"n={f.n} k={params.k} s={params.s} p={params.p} mode={params.mode.value}", file=out)
        print(f"L={report.gates} D={report.depth} q={report.ancilla} width={report.width}", file=out)
        print(f"predicted D~{pr.depth:g} L~{pr.gates:.1f} q~{pr.ancilla:.1f}", file=out)
        print("verify: pass", file=out)
    return EXIT_OK


def cmd_verify(args, out):
    c = _load_circuit(args.circuit)
    f = formats.parse_tt(_read(args.tt))
    if f.n != c.n_primary:
        raise UsageError(f"table has n={f.n} but circuit has {c.n_primary} inputs")
    verdict = check_realizes(c, f)
    print(str(verdict), file=out)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_sim(args, out):
    c = _load_circuit(args.circuit)
    bits = args.input.strip()
    if len(bits) != c.n_primary or set(bits) - {"0", "1"}:
        raise UsageError(f"--input must be {c.n_primary} bits of 0/1")
    state = simulate(c, [int(b) for b in bits])
    print("state   " + "".join(map(str, state)), file=out)
    print("outputs " + "".join(str(state[line]) for line in c.output_map), file=out)
    return EXIT_OK


def cmd_depth(args, out):
    c = _load_circuit(args.circuit).check()
    part = greedy_layering(c)
    print(f"L={len(c)} D={part.depth}", file=out)
    if args.layers:
        for idx, layer in enumerate(part.layers(c), 1):
            print(f"{idx}: " + " ".join(str(g) for g in layer), file=out)
    return EXIT_OK


def cmd_bounds(args, out):
    rep = shannon_lower_bounds(args.n, args.q, args.phi)
    if args.json:
        out.write(formats.write_stats(rep))
        return EXIT_OK
    rows = [
        ("gate alphabet r", f"{rep.r}"),
        ("L_lower (complexity)", f"{rep.L_lower:.6g}"),
        ("D_lower (depth)", f"{rep.D_lower:.6g}"),
        ("D0_lower (q=0, asymptotic)", "n/a" if rep.D0_lower is None else f"{rep.D0_lower:.6g}"),
        ("log2 placements", f"{rep.placements_log2:.6g}"),
        ("upper D ~ 3n at q ~ 2^n", f"D={rep.upper_D_3n:g} q={rep.upper_q_3n:g}"),
        ("upper D ~ 2n at q ~ phi 2^n", f"D={rep.upper_D_2n:g} q={rep.upper_q_2n:g}"),
    ]
    print(f"n={rep.n} q={rep.q} width={rep.width}", file=out)
    for name, val in rows:
        print(f"  {name:<30} {val}", file=out)
    print(f"  L_lower={rep.L_lower:.1f} D_lower={rep.D_lower:.1f}", file=out)
    if not rep.in_domain:
        print("  note: n + q < 3, out of formula domain", file=out)
    if rep.clamped:
        print("  note: negative bound clamped to 0", file=out)
    return EXIT_OK


def cmd_minterms(args, out):
    k = args.n
    alloc = LineAllocator(k)
    res = minterm_family(list(range(k)), alloc)
    c = Circuit(k + alloc.used, tuple(res.gates), k)
    notes = [f"minterm {sigma:0{k}b} -> line {line + 1}" for sigma, line in sorted(res.outputs.items())]
    _write(args.output, formats.write_circuit(c, notes))
    print(f"L={len(c)} D={greedy_layering(c).depth} q={c.n_ancilla}", file=out)
    return EXIT_OK


def cmd_random(args, out):
    if args.lines < 1 or args.gates < 0:
        raise UsageError("--lines must be >= 1 and --gates >= 0")
    c = random_circuit(args.lines, args.gates, args.seed)
    _write(args.output, formats.write_circuit(c))
    return EXIT_OK


def cmd_perm(args, out):
    c = _load_circuit(args.circuit)
    p = extract_permutation(c, PERM_CAP)
    print(f"points={len(p)} cycles={p.cycle_count()} parity={parity(p)}", file=out)
    return EXIT_OK


def cmd_export_real(args, out):
    c = _load_circuit(args.circuit).check()
    _write(args.output, formats.export_real(c))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="revdepth", description="Reversible circuit depth toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a circuit from a truth table")
    p.add_argument("--tt", required=True)
    p.add_argument("--mode", choices=["d3n", "d2n"], default="d3n")
    p.add_argument("--phi", default="log2", help="log2 or const=<c>")
    p.add_argument("--k", type=int)
    p.add_argument("--full-groups", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--stats")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="check that a circuit realizes a truth table")
    p.add_argument("--circuit", required=True)
    p.add_argument("--tt", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sim", help="simulate one input")
    p.add_argument("--circuit", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("depth", help="gate count and greedy depth")
    p.add_argument("--circuit", required=True)
    p.add_argument("--layers", action="store_true")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("bounds", help="lower bounds and upper-bound predictions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--phi", default="log2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("minterms", help="emit the all-minterms circuit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_minterms)

    p = sub.add_parser("random", help="deterministic pseudorandom circuit")
    p.add_argument("--lines", type=int, required=True)
    p.add_argument("--gates", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("perm", help="cycle count and parity of the induced permutation")
    p.add_argument("--circuit", required=True)
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("export-real", help="write RevLib .real")
    p.add_argument("--circuit", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_export_real)
    return ap


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
