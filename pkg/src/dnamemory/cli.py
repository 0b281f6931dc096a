"""Command-line entry point.

Exit codes: 0 success, 1 invalid input or unreadable, 2 ambiguous decode,
3 design failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import formats
from .assembly import anneal, ligate, oligo_fasta
from .digest import DEFAULT_RESOLUTION_BP, decode_gel, digest, gel_text, render_gel
from .errors import AmbiguousError, DecodeError, DesignError, LigationError
from .layout import design_carrier, palindromize, verify_decodable
from .porescan import TraceParams, decode_trace, detect_events, stud, translocate

EXIT_OK, EXIT_INVALID, EXIT_AMBIGUOUS, EXIT_DESIGN = 0, 1, 2, 3


class _Run:
    """Collects inputs/outputs of one invocation for the optional manifest."""

    def __init__(self, args):
        self.args = args
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self._stdout: list[str] = []

    def read(self, path) -> str:
        text = Path(path).read_text()
        self.inputs[str(path)] = formats.sha256_text(text)
        return text

    def emit(self, text: str, path=None) -> None:
        if path is None or str(path) == "-":
            sys.stdout.write(text)
            self._stdout.append(text)
            self.outputs["<stdout>"] = formats.sha256_text("".join(self._stdout))
            return
        Path(path).write_text(text)
        self.outputs[str(path)] = formats.sha256_text(text)

    def manifest(self, code: int) -> dict:
        params = {k: v for k, v in vars(self.args).items()
                  if k not in ("func", "manifest", "out", "seed", "command")}
        return {"subcommand": self.args.command, "seed": self.args.seed, "out": self.args.out,
                "parameters": params, "inputs": self.inputs, "outputs": self.outputs,
                "exit_code": code}


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _trace_params(args) -> TraceParams:
    p = TraceParams()
    overrides = {
        "noise_sigma": args.noise,
        "velocity": args.velocity,
        "sample_rate": args.sample_rate,
        "stud_footprint": args.footprint,
    }
    return TraceParams(**{**p.__dict__, **{k: v for k, v in overrides.items() if v is not None}})


def _orientation(args) -> str:
    if args.orientation == "random":
        return ("forward", "reverse")[int(np.random.default_rng(args.seed).integers(2))]
    return args.orientation


def cmd_design(args, run: _Run) -> int:
    layout = design_carrier(
        args.bits, args.address_len, _ints(args.cuts) if args.cuts else None,
        length=args.length, spacing=args.spacing, flank=args.flank, bit_order=args.bit_order,
        min_address_distance=args.min_distance, max_attempts=args.max_attempts, seed=args.seed,
    )
    run.emit(formats.dumps(formats.layout_to_dict(layout)), args.out)
    return EXIT_OK


def cmd_palindromize(args, run: _Run) -> int:
    layout = formats.layout_from_dict(json.loads(run.read(args.layout)))
    out = palindromize(layout, args.spacer, seed=args.seed, max_attempts=args.max_attempts)
    run.emit(formats.dumps(formats.layout_to_dict(out)), args.out)
    return EXIT_OK


def cmd_write(args, run: _Run) -> int:
    layout = formats.layout_from_dict(json.loads(run.read(args.layout)))
    asm = anneal(layout, args.message)
    if args.ligate:
        asm = ligate(asm)
    run.emit(formats.dumps(formats.assembly_to_dict(asm)), args.out)
    oligo_path = args.oligos
    if oligo_path is None and args.out not in (None, "-"):
        oligo_path = str(Path(args.out).with_suffix(".oligos.fasta"))
    if oligo_path is not None:
        run.emit(oligo_fasta(asm.oligos), oligo_path)
    return EXIT_OK


def cmd_verify(args, run: _Run) -> int:
    layout = formats.layout_from_dict(json.loads(run.read(args.layout)))
    report = verify_decodable(layout, args.resolution, max_bits=args.max_bits)
    if args.format == "json":
        doc = {"total_states": report.total_states, "distinct_signatures": report.distinct_signatures,
               "collisions": [list(p) for p in report.collisions], "decodable": report.decodable}
        run.emit(formats.dumps(doc), args.out)
    else:
        lines = [f"states: {report.total_states}", f"distinct signatures: {report.distinct_signatures}",
                 f"decodable: {'yes' if report.decodable else 'no'}"]
        lines += [f"collision: {a} {b}" for a, b in report.collisions]
        run.emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.decodable else EXIT_AMBIGUOUS


def cmd_read(args, run: _Run) -> int:
    asm = formats.assembly_from_dict(json.loads(run.read(args.assembly)))
    layout = asm.layout
    record: dict = {"mode": args.mode}
    try:
        if args.mode == "gel":
            frags = digest(asm)
            lane = render_gel(frags, args.resolution)
            record.update(fragments=formats.fragments_to_dict(frags), lane=formats.lane_to_dict(lane))
            if args.gel_text:
                run.emit(gel_text(lane, title=f"lane ({asm.bits})"), args.gel_text)
            bits = decode_gel(lane, layout)
        else:
            params = _trace_params(args)
            orientation = _orientation(args)
            trace = translocate(stud(asm), params, orientation, seed=args.seed)
            events = detect_events(trace)
            record.update(orientation=orientation, **formats.events_to_dict(events))
            bits = decode_trace(events, layout, params, orientation if args.oriented else None)
    except AmbiguousError as exc:
        record.update(error="ambiguous", candidates=list(exc.candidates))
        if args.out:
            run.emit(formats.dumps(record), args.out)
        print(f"ambiguous: {' '.join(exc.candidates)}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except DecodeError as exc:
        record.update(error="unreadable", message=str(exc))
        if args.out:
            run.emit(formats.dumps(record), args.out)
        print(f"unreadable: {exc}", file=sys.stderr)
        return EXIT_INVALID

    record["bits"] = bits
    if args.out:
        run.emit(formats.dumps(record), args.out)
    if args.format == "json":
        run.emit(formats.dumps(record))
    else:
        run.emit(bits + "\n")
    return EXIT_OK


def cmd_pore_sim(args, run: _Run) -> int:
    asm = formats.assembly_from_dict(json.loads(run.read(args.assembly)))
    trace = translocate(stud(asm), _trace_params(args), _orientation(args), seed=args.seed)
    run.emit(formats.trace_to_text(trace), args.out)
    if args.events_out:
        run.emit(formats.dumps(formats.events_to_dict(detect_events(trace))), args.events_out)
    return EXIT_OK


def cmd_pore_decode(args, run: _Run) -> int:
    layout = formats.layout_from_dict(json.loads(run.read(args.layout)))
    trace = formats.trace_from_text(run.read(args.trace))
    events = detect_events(trace)
    try:
        bits = decode_trace(events, layout, trace.params, trace.orientation if args.oriented else None)
    except AmbiguousError as exc:
        print(f"ambiguous: {' '.join(exc.candidates)}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except DecodeError as exc:
        print(f"unreadable: {exc}", file=sys.stderr)
        return EXIT_INVALID
    run.emit(bits + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized step")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="standard-output format for reports")
    common.add_argument("--manifest", help="write a run manifest (JSON) to this path")

    pore = argparse.ArgumentParser(add_help=False)
    pore.add_argument("--orientation", choices=("forward", "reverse", "random"), default="forward")
    pore.add_argument("--noise", type=float, help="current noise sigma (default 0)")
    pore.add_argument("--velocity", type=float, help="bases per second")
    pore.add_argument("--sample-rate", type=float, help="samples per second")
    pore.add_argument("--footprint", type=float, help="stud footprint in bases")

    parser = argparse.ArgumentParser(prog="dnamemory", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", parents=[common], help="generate a carrier layout")
    p.add_argument("--bits", type=int, required=True, help="number of memory slots")
    p.add_argument("--length", type=int, help="carrier length in bases")
    p.add_argument("--cuts", help="comma-separated cut coordinates (site start + 1)")
    p.add_argument("--address-len", type=int)
    p.add_argument("--spacing", type=int, help="distance between consecutive cuts")
    p.add_argument("--flank", type=int, default=0)
    p.add_argument("--bit-order", choices=("descending", "ascending"), default="descending")
    p.add_argument("--min-distance", type=int, default=8, help="minimum address Hamming distance")
    p.add_argument("--max-attempts", type=int, default=10_000)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("palindromize", parents=[common], help="mirror a layout about its center")
    p.add_argument("layout")
    p.add_argument("--spacer", type=int, help="distance between the two central cuts")
    p.add_argument("--max-attempts", type=int, default=10_000)
    p.set_defaults(func=cmd_palindromize)

    p = sub.add_parser("write", parents=[common], help="anneal addressing oligos for a message")
    p.add_argument("layout")
    p.add_argument("message", help="bit string, digit 0 leftmost")
    p.add_argument("--ligate", action="store_true", help="seal nicks between abutting oligos")
    p.add_argument("--oligos", help="oligo FASTA path (default: next to --out)")
    p.set_defaults(func=cmd_write)

    p = sub.add_parser("read", parents=[common, pore], help="decode an assembly by gel or pore")
    p.add_argument("assembly")
    p.add_argument("--mode", choices=("gel", "pore"), default="gel")
    p.add_argument("--resolution", type=float, default=DEFAULT_RESOLUTION_BP, help="gel merge window (bp)")
    p.add_argument("--gel-text", help="write a plain-text gel picture here ('-' for stdout)")
    p.add_argument("--oriented", action="store_true", help="decoder knows the entry orientation")
    p.set_defaults(func=cmd_read)

    p = sub.add_parser("verify", parents=[common], help="exhaustive decodability check")
    p.add_argument("layout")
    p.add_argument("--resolution", type=float, help="compare merged gel bands instead of exact lengths")
    p.add_argument("--max-bits", type=int, default=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pore-sim", parents=[common, pore], help="simulate a nanopore trace")
    p.add_argument("assembly")
    p.add_argument("--events-out", help="also write detected events (JSON)")
    p.set_defaults(func=cmd_pore_sim)

    p = sub.add_parser("pore-decode", parents=[common], help="decode a trace file")
    p.add_argument("trace")
    p.add_argument("--layout", required=True)
    p.add_argument("--oriented", action="store_true")
    p.set_defaults(func=cmd_pore_decode)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    run = _Run(args)
    try:
        code = args.func(args, run)
    except DesignError as exc:
        print(f"design failed ({exc.constraint}): {exc}", file=sys.stderr)
        code = EXIT_DESIGN
    except (ValueError, IndexError, LigationError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INVALID
    if args.manifest:
        Path(args.manifest).write_text(formats.dumps(run.manifest(code)))
    return code


if __name__ == "__main__":
    sys.exit(main())
