"""Command-line front end: ``dpnlive <command> <file> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence, TextIO

from . import analyzer
from .analyzer import Method, NoChannels
from .encoder import SYMBOLIC_Z, build_base_system, build_block_clauses, disjunct_constraint, encode_big_m
from .gomory import CutConfig
from .model import Blocking, Dimensioning, InvalidDimensioning, Network, mirror_transform
from .oracle import explore, format_trace
from .textio import ParseFailure, emit_network, emit_report, format_rational, parse

EXIT_OK = 0
EXIT_NEGATIVE = 10
EXIT_INCONCLUSIVE = 11
EXIT_USAGE = 2

_EXIT = {
    "live": EXIT_OK,
    "bounded-live": EXIT_OK,
    "live-for-all-valid": EXIT_OK,
    "no-deadlock": EXIT_OK,
    "unknown": EXIT_NEGATIVE,
    "unbounded": EXIT_NEGATIVE,
    "blocked": EXIT_NEGATIVE,
    "inconclusive": EXIT_INCONCLUSIVE,
    "truncated": EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dpnlive", description="Static liveness and buffer-dimensioning analysis for dataflow process networks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, dims=False, solver=False):
        sp.add_argument("input", help="network description file ('-' for stdin)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--blocking", choices=[b.value for b in Blocking], default=Blocking.FROM_MODEL.value,
                        help="blockedness notion (default: from each task's mode)")
        if dims:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--dims", help="capacities, e.g. f=1,g=2")
            g.add_argument("--z-uniform", type=int, metavar="N", help="same capacity N on every channel")
        if solver:
            sp.add_argument("--max-cuts", type=int, default=CutConfig.max_cuts)
            sp.add_argument("--max-pivots", type=int, default=CutConfig.max_pivots)
            sp.add_argument("--dump-constraints", action="store_true", help="print the constraint system to stderr")
            sp.add_argument("--dump-cuts", action="store_true", help="log every Gomory cut to stderr")
            sp.add_argument("--timing", action="store_true", help="report wall-clock milliseconds")
            sp.add_argument("--deadline", type=float, metavar="SECONDS", help="give up (inconclusive) after this long")
        sp.add_argument("--dump-witness", action="store_true", help="print the witness in raw form to stderr")

    check = sub.add_parser("check", help="try to prove liveness under given capacities")
    common(check, dims=True, solver=True)
    check.add_argument("--method", choices=[m.value for m in Method], default=Method.BRANCH_ILP.value)
    check.add_argument("--parallel", type=int, default=1, metavar="N", help="solve branches in N processes")

    dim = sub.add_parser("dimension", help="compute a uniform capacity that guarantees liveness")
    common(dim, solver=True)
    dim.add_argument("--method", choices=[Method.BRANCH_LP.value, Method.BRANCH_ILP.value],
                     default=Method.BRANCH_ILP.value)

    exp = sub.add_parser("explore", help="exhaustive state-space search for blocked configurations")
    common(exp, dims=True)
    exp.add_argument("--max-configs", type=int, default=1_000_000)

    mir = sub.add_parser("mirror", help="print the network with capacities turned into mirror channels")
    mir.add_argument("input")
    g = mir.add_mutually_exclusive_group()
    g.add_argument("--dims")
    g.add_argument("--z-uniform", type=int, metavar="N")

    val = sub.add_parser("validate", help="parse and check structural assumptions")
    val.add_argument("input")
    val.add_argument("--json", action="store_true")
    return p


def parse_dims(text: str, network: Network) -> Dimensioning:
    caps: dict[str, int] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad capacity {item!r}, expected channel=N")
        try:
            caps[name.strip()] = int(value)
        except ValueError:
            raise UsageError(f"bad capacity {item!r}, expected channel=N") from None
    return Dimensioning(caps)


def _dims(args, network: Network) -> Dimensioning:
    if args.dims is not None:
        return parse_dims(args.dims, network)
    if args.z_uniform is not None:
        return Dimensioning.uniform(network, args.z_uniform)
    raise UsageError(f"{args.command} needs --dims or --z-uniform")


def _read(path: str, stdin: TextIO) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _dump_witness(witness, err: TextIO) -> None:
    for k, v in sorted(witness.items()):
        err.write(f"{k} = {format_rational(v)}\n")


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None,
        stdin: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    try:
        text = _read(args.input, stdin or sys.stdin)
        try:
            network = parse(text)
        except ParseFailure as e:
            if args.command == "validate" and args.json:
                payload = {
                    "command": "validate",
                    "result": "invalid",
                    "errors": [
                        {"line": x.span.line, "column": x.span.column, "length": x.span.length,
                         "kind": x.kind.value, "message": x.message}
                        for x in e.errors
                    ],
                }
                out.write(json.dumps(payload, indent=2) + "\n")
            for x in e.errors:
                err.write(f"{args.input}:{x}\n")
            return EXIT_USAGE
        return _dispatch(args, network, out, err)
    except (UsageError, InvalidDimensioning, NoChannels, ValueError) as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE


def _dispatch(args, network: Network, out: TextIO, err: TextIO) -> int:
    cmd = args.command
    if cmd == "validate":
        if args.json:
            out.write(json.dumps({"command": cmd, "network": network.name, "result": "valid"}, indent=2) + "\n")
        else:
            out.write("VALID\n")
        return EXIT_OK

    if cmd == "mirror":
        out.write(emit_network(mirror_transform(network, _dims(args, network))))
        return EXIT_OK

    override = Blocking(args.blocking)
    fmt = "json" if args.json else "text"

    if cmd == "explore":
        dims = _dims(args, network)
        result = explore(network, dims, max_configs=args.max_configs, override=override)
        out.write(emit_report(result, fmt, command=cmd, network=network.name))
        if args.dump_witness and result.blocked:
            err.write(format_trace(result.blocked[0].trace))
        key = "blocked" if result.blocked else ("truncated" if result.truncated else "no-deadlock")
        return _EXIT[key]

    config = CutConfig(max_cuts=args.max_cuts, max_pivots=args.max_pivots)
    log = (lambda line: err.write(line + "\n")) if args.dump_cuts else None
    method = Method(args.method)
    started = time.monotonic()

    if cmd == "check":
        dims = _dims(args, network)
        dims.check(network)
        if args.dump_constraints:
            base = build_base_system(network, dims)
            clauses = build_block_clauses(network, override)
            system = encode_big_m(base, clauses).system if method is Method.BIG_M_LP else base.system
            err.write(system.dump())
            if method is not Method.BIG_M_LP:
                for c in clauses.clauses:
                    err.write(f"# clause {c.owner}: " + " | ".join(str(disjunct_constraint(base, d)) for d in c.disjuncts) + "\n")
        report = analyzer.check_liveness(network, dims, method, override, config, log,
                                         workers=args.parallel, deadline=args.deadline)
    else:
        if args.dump_constraints:
            base = build_base_system(network, SYMBOLIC_Z)
            err.write(base.system.dump())
        report = analyzer.dimension(network, method, override, config, log, deadline=args.deadline)

    if args.timing:
        report.stats.millis = int((time.monotonic() - started) * 1000)
    out.write(emit_report(report, fmt, command=cmd, network=network.name))
    if args.dump_witness and report.witness is not None:
        _dump_witness(report.witness, err)
    return _EXIT[report.kind]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
