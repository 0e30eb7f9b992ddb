"""Command-line front door.

Reads a DSL program from --input or stdin, runs the symbolic analysis (or
the exact concrete analysis when --param bindings are given), and prints a
text or JSON report. Exit codes: 0 success, 1 program diagnostics,
2 I/O or resource errors.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys

from .errors import ResourceLimitError, SourceError
from .locality import analyze_concrete
from .parser import parse_source
from .report import (
    build_concrete_report,
    build_symbolic_report,
    render_concrete_text,
    render_symbolic_text,
)
from .semantics import validate
from .symbolic import analyze_symbolic, assemble_dmd
from .symbolic_config import SymbolicConfig

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_RESOURCE = 2


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="loopdmd",
        description="Reuse-distance and data-movement-distance analysis of affine loop programs.",
    )
    p.add_argument("--input", help="DSL source file (default: read stdin)")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--block-size", type=int, default=1, metavar="B",
                   help="cache-line size in elements (default 1)")
    p.add_argument("--num-sets", type=int, default=1, metavar="S",
                   help="cache set count for set-index tagging (default 1)")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                   help="bind a parameter and run the exact concrete analysis "
                        "(repeat for multiple parameters)")
    p.add_argument("--sample-base", type=int, default=None,
                   help="smallest sampled parameter value (default: planner)")
    p.add_argument("--points-per-residue", type=int, default=None,
                   help="sampled values per axis per residue class (default: degree + 2)")
    p.add_argument("--degree-bound", type=int, default=None,
                   help="polynomial degree bound (default: loop depth)")
    p.add_argument("--period", type=int, default=None,
                   help="quasi-polynomial period override (default: lcm of steps/divisors)")
    p.add_argument("--retries", type=int, default=1,
                   help="degree bumps to try after a fit failure (default 1)")
    p.add_argument("--validation-bindings", type=int, default=2,
                   help="extra off-grid bindings checked exactly (default 2)")
    p.add_argument("--timeout-seconds", type=int, default=None,
                   help="abort the analysis after this many seconds")
    p.add_argument("--max-operations", type=int, default=None,
                   help="accepted for compatibility; ignored by the enumeration backend")
    p.add_argument("--approximation-method", default=None,
                   help="accepted for compatibility; ignored by the enumeration backend")
    return p


def _read_source(args, stderr) -> str | None:
    if args.input:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                return fh.read()
        except OSError as e:
            print(f"error: cannot read {args.input}: {e}", file=stderr)
            return None
    return sys.stdin.read()


def _parse_bindings(pairs: list[str], params: list[str]) -> dict[str, int]:
    binding: dict[str, int] = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ValueError(f"--param expects NAME=VALUE, got {pair!r}")
        if name not in params:
            raise ValueError(f"--param {name!r} is not a program parameter {params}")
        binding[name] = int(value)
    missing = [p for p in params if p not in binding]
    if missing:
        raise ValueError(f"--param missing values for {missing}")
    return binding


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_arg_parser().parse_args(argv)

    if args.block_size < 1 or args.num_sets < 1:
        print("error: --block-size and --num-sets must be >= 1", file=stderr)
        return EXIT_RESOURCE
    for flag in ("max_operations", "approximation_method"):
        if getattr(args, flag) is not None:
            print(
                f"warning: --{flag.replace('_', '-')} is ignored by the enumeration backend",
                file=stderr,
            )

    source = _read_source(args, stderr)
    if source is None:
        return EXIT_RESOURCE

    if args.timeout_seconds:
        def on_alarm(signum, frame):
            raise ResourceLimitError(f"analysis exceeded {args.timeout_seconds}s timeout")

        signal.signal(signal.SIGALRM, on_alarm)
        signal.alarm(args.timeout_seconds)

    try:
        return _run(args, source, stdout, stderr)
    except ResourceLimitError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_RESOURCE
    finally:
        if args.timeout_seconds:
            signal.alarm(0)


def _run(args, source: str, stdout, stderr) -> int:
    config_json = {
        "block_size": args.block_size,
        "num_sets": args.num_sets,
        "mode": "concrete" if args.param else "symbolic",
    }
    try:
        validated = validate(parse_source(source))
    except SourceError as e:
        diags = [d.to_json() for d in e.diagnostics]
        if args.json:
            doc = {
                "program": {"params": []},
                "config": config_json,
                "diagnostics": diags,
            }
            json.dump(doc, stdout, indent=2)
            stdout.write("\n")
        else:
            for d in e.diagnostics:
                print(str(d), file=stderr)
        return EXIT_DIAGNOSTICS

    if args.param:
        try:
            binding = _parse_bindings(args.param, validated.params)
        except ValueError as e:
            print(f"error: {e}", file=stderr)
            return EXIT_RESOURCE
        records, dist = analyze_concrete(
            validated, binding, args.block_size, args.num_sets
        )
        if args.json:
            doc = build_concrete_report(validated, dist, binding, config_json)
            json.dump(doc, stdout, indent=2)
            stdout.write("\n")
        else:
            stdout.write(render_concrete_text(validated, dist, binding))
        return EXIT_OK

    config = SymbolicConfig(
        base=args.sample_base,
        points_per_residue=args.points_per_residue,
        degree_bound=args.degree_bound,
        period=args.period,
        retries=args.retries,
        validation_bindings=args.validation_bindings,
    )
    dist = analyze_symbolic(validated, args.block_size, args.num_sets, config)
    dmd = assemble_dmd(dist)
    if args.json:
        sym_config = dict(config_json)
        sym_config.update(
            {
                "period": dist.period,
                "degree_bound": dist.degree,
                "grid_bindings": len(dist.grid),
                "validation_bindings": len(dist.validation),
            }
        )
        doc = build_symbolic_report(validated, dist, dmd, sym_config)
        json.dump(doc, stdout, indent=2)
        stdout.write("\n")
    else:
        stdout.write(render_symbolic_text(validated, dist, dmd))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
