"""Command-line front end: ``semicrossed run|examples|example|verify``."""
from __future__ import annotations

import argparse
import json
import sys

from . import catalog, report
from .errors import SemicrossedError, UnknownExample
from .runner import DEFAULT_KMAX, run_scenario
from .scenario import parse, parse_vector
from .verify import verify_all


def _cap(text: str) -> tuple:
    try:
        return parse_vector(text)
    except SemicrossedError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semicrossed", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="run a scenario file ('-' for stdin) or a built-in via --example")
    run.add_argument("path", nargs="?")
    run.add_argument("--example", help="run a built-in scenario by name")
    run.add_argument("--seed", type=_u64, default=0)
    run.add_argument("--kmax", type=int, default=DEFAULT_KMAX, help="spectral depth and witness depth cap")
    run.add_argument("--cap", type=_cap, default=None, help="degree cap for spectral brackets, e.g. [8,8]")
    run.add_argument("--format", choices=("human", "machine"), default="human")

    sub.add_parser("examples", help="list built-in scenarios")

    ex = sub.add_parser("example", help="print a built-in scenario")
    ex.add_argument("name")

    ver = sub.add_parser("verify", help="run every acceptance criterion on the built-in catalog")
    ver.add_argument("--seed", type=_u64, default=0)
    ver.add_argument("--kmax", type=int, default=4, help="witness depth")
    ver.add_argument("--format", choices=("human", "machine"), default="human")
    return p


def _load(args):
    if args.example:
        return catalog.emit_example(args.example), args.example
    if args.path is None:
        raise SemicrossedError("give a scenario path or --example NAME")
    if args.path == "-":
        return sys.stdin.read(), "<stdin>"
    with open(args.path, encoding="utf-8") as fh:
        return fh.read(), args.path


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.cmd == "examples":
            for name, desc in catalog.list_examples():
                out.write(f"{name}\t{desc}\n")
            return 0
        if args.cmd == "example":
            out.write(catalog.emit_example(args.name))
            return 0
        if args.cmd == "verify":
            if args.kmax < 1:
                raise SemicrossedError("--kmax must be at least 1")
            human = args.format == "human"
            outcomes = verify_all(args.seed, args.kmax, progress=(lambda o: out.write(o.line() + "\n")) if human else None)
            ok = all(o.passed for o in outcomes)
            if not human:
                out.write(json.dumps({"criteria": [o.to_json() for o in outcomes], "ok": ok}, sort_keys=True, indent=2) + "\n")
            return 0 if ok else 1
        # run
        if args.kmax < 1:
            raise SemicrossedError("--kmax must be at least 1")
        text, source = _load(args)
        sc = parse(text)
        rep = run_scenario(sc, seed=args.seed, kmax=args.kmax, cap=args.cap, source=source)
        out.write(report.dumps(rep) if args.format == "machine" else report.render_human(rep))
        return 0 if rep["ok"] else 1
    except UnknownExample as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except (SemicrossedError, OSError) as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return 2
