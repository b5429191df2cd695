"""Command-line front end: ``quam encode|retrieve|compare``.

Pattern files hold one bit-string per line, leftmost character the highest
qubit. Exit status: 0 success, 2 input error, 3 no matching stored pattern,
4 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analysis import compare
from .encode_pt import AddressMap, build_pt_circuit, data_state, read_address_map
from .encode_vm import build_vm_circuit, memory_state
from .errors import InputError, QuamError, SizeError
from .patterns import PatternSet, read_pattern_file
from .reduce import build_reduced_circuit, plan_reduction, reduced_write_network
from .retrieval import build_oracle, pt_retrieve, standard_retrieve, vm_retrieve

OUT_DIR_ENV = "QUAM_OUT_DIR"

EXIT_OK, EXIT_INPUT, EXIT_NO_SOLUTION, EXIT_INTERNAL = 0, 2, 3, 4


def _output_path(name: str | None) -> Path | None:
    """Resolve ``name`` against ``$QUAM_OUT_DIR`` when it is relative."""
    if name is None or name == "-":
        return None
    path = Path(name)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _emit(text: str, name: str | None) -> bool:
    """Write ``text`` to ``name`` or stdout; True if it went to a file."""
    path = _output_path(name)
    if path is None:
        sys.stdout.write(text)
        return False
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return True


def _default_out(args, suffix: str) -> str | None:
    if args.out:
        return args.out
    if os.environ.get(OUT_DIR_ENV):
        return f"{Path(args.patterns).stem}.{args.command}.{suffix}"
    return None


def _load(args) -> tuple[PatternSet, AddressMap | None]:
    patterns = read_pattern_file(args.patterns)
    amap = None
    if getattr(args, "map", None):
        amap = read_address_map(args.map)
        if set(amap.entries) != set(patterns):
            raise InputError("address map does not cover exactly the stored patterns")
    return patterns, amap


def _pt_map(patterns: PatternSet, amap: AddressMap | None) -> AddressMap:
    return amap if amap is not None else AddressMap.in_order(patterns)


def cmd_encode(args) -> int:
    patterns, amap = _load(args)
    m = patterns.m
    if args.method == "vm":
        circuit = build_vm_circuit(patterns)
        state = memory_state(circuit.simulate(), m)
    elif args.method == "pt":
        amap = _pt_map(patterns, amap)
        circuit = build_pt_circuit(amap)
        state = data_state(circuit.simulate(), m)
    else:
        plan = plan_reduction(amap if amap is not None else patterns)
        circuit = build_reduced_circuit(plan)
        state = data_state(circuit.simulate(), m)
        if args.explain_plan:
            sys.stderr.write(plan.explain())
    if args.emit_circuit:
        _emit(circuit.to_text(), args.emit_circuit)
    doc = {
        "method": args.method,
        "m": m,
        "k": patterns.k,
        "patterns": patterns.strings(),
        "amplitudes": state.to_pairs(),
    }
    _emit(json.dumps(doc) + "\n", _default_out(args, "json"))
    return EXIT_OK


def cmd_retrieve(args) -> int:
    patterns, amap = _load(args)
    oracle = build_oracle(patterns, args.query, args.epsilon)
    if not oracle.marked:
        print(f"no {args.epsilon}-similar stored pattern for query {args.query}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    if args.method == "grover":
        report = standard_retrieve(patterns, oracle, args.rotations, seed=args.seed)
    elif args.method == "vm":
        report = vm_retrieve(patterns, oracle, args.rotations, seed=args.seed)
    elif args.method == "pt":
        report = pt_retrieve(_pt_map(patterns, amap), oracle, args.rotations, seed=args.seed)
    else:
        plan = plan_reduction(amap if amap is not None else patterns)
        report = pt_retrieve(
            plan.assignment, oracle, args.rotations, reduced_write_network(plan), seed=args.seed
        )
    doc = report.to_dict(snapshots=args.trace)
    to_file = _emit(json.dumps(doc) + "\n", _default_out(args, "json"))
    print(f"outcome {report.outcome_pattern}", file=sys.stdout if to_file else sys.stderr)
    return EXIT_OK


def cmd_compare(args) -> int:
    patterns, amap = _load(args)
    oracle = build_oracle(patterns, args.query, args.epsilon)
    if not oracle.marked:
        print(f"no {args.epsilon}-similar stored pattern for query {args.query}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    result = compare(patterns, oracle, amap)
    text = result.to_csv() if args.format == "csv" else result.to_json() + "\n"
    _emit(text, _default_out(args, args.format))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("patterns", help="pattern file, one bit-string per line")
        p.add_argument("--map", help="address map file ('addr -> pattern' lines)")
        p.add_argument("--out", help=f"output file (relative paths land in ${OUT_DIR_ENV})")

    enc = sub.add_parser("encode", help="build a storage circuit and dump the final state")
    common(enc)
    enc.add_argument("--method", choices=["vm", "pt", "pt-reduced"], default="pt-reduced")
    enc.add_argument("--emit-circuit", metavar="PATH", help="write the circuit in text form ('-' for stdout)")
    enc.add_argument("--explain-plan", action="store_true", help="print the reduce schedule to stderr")
    enc.set_defaults(func=cmd_encode)

    ret = sub.add_parser("retrieve", help="run a retrieval and report the trace")
    common(ret)
    ret.add_argument("--method", choices=["grover", "vm", "pt", "pt-reduced"], default="vm")
    ret.add_argument("--query", required=True)
    ret.add_argument("--epsilon", type=int, default=0)
    ret.add_argument("--rotations", type=int)
    ret.add_argument("--seed", type=int, help="sample the outcome instead of taking the argmax")
    ret.add_argument("--trace", action="store_true", help="include every rotation snapshot")
    ret.set_defaults(func=cmd_retrieve)

    cmp_ = sub.add_parser("compare", help="predicted versus actual cost report")
    common(cmp_)
    cmp_.add_argument("--query", required=True)
    cmp_.add_argument("--epsilon", type=int, default=0)
    cmp_.add_argument("--format", choices=["json", "csv"], default="json")
    cmp_.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SizeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QuamError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
