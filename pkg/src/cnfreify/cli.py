"""Command line interface: reify, propagate, flp, gen, check, stats."""

from __future__ import annotations

import argparse
import sys
from typing import TextIO

from .cnf import CnfFormula, DimacsError, Literal, normalize, parse_dimacs, \
    serialize_dimacs
from .flp import all_literals, probe_literal, simulate_flp
from .propagation import (Conflict, decoupled_closure, propagate_queue,
                          propagate_rounds)
from .reify import ReifyError, ReifyOptions, expected_counts_for, reify
from .testgen import (CheckReport, GenConfig, differential_check,
                      exhaustive_check, gen_random_cnf)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CONFLICT = 10
EXIT_MISMATCH = 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _literal(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid literal {text!r}")
    if value == 0:
        raise argparse.ArgumentTypeError("0 is not a literal")
    return value


def _literal_list(text: str) -> list[int]:
    return [_literal(t) for t in text.replace(",", " ").split()]


def _inject(text: str):
    if text == "all":
        return None
    if text == "none":
        return frozenset()
    try:
        return frozenset(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid --inject value {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cnfreify",
                description="Reified unit propagation toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def reify_flags(sp):
        sp.add_argument("--layers", type=int, default=None)
        sp.add_argument("--inject", type=_inject, default=None,
                        help="all | none | comma-separated variables")
        sp.add_argument("--no-conflict-var", action="store_true")

    r = sub.add_parser("reify", help="write the reified counterpart")
    r.add_argument("input")
    reify_flags(r)
    r.add_argument("-o", "--output", default="-")

    pr = sub.add_parser("propagate", help="run unit propagation")
    pr.add_argument("input")
    pr.add_argument("--mode", choices=("queue", "rounds", "decoupled"),
                    default="queue")
    pr.add_argument("--trace", action="store_true")
    pr.add_argument("--assume", type=_literal_list, default=[])
    pr.add_argument("--max-rounds", type=int, default=None)

    fl = sub.add_parser("flp", help="failed-literal probing")
    fl.add_argument("input")
    which = fl.add_mutually_exclusive_group(required=True)
    which.add_argument("--probe", type=_literal)
    which.add_argument("--all", action="store_true")
    fl.add_argument("--via", choices=("native", "reified", "both"),
                    default="both")

    g = sub.add_parser("gen", help="generate a random formula")
    g.add_argument("--seed", type=_seed, required=True)
    g.add_argument("--vars", type=int, required=True)
    g.add_argument("--clauses", type=int, required=True)
    g.add_argument("--width", type=int, required=True)
    g.add_argument("--allow-units", action="store_true")
    g.add_argument("-o", "--output", default="-")

    c = sub.add_parser("check", help="differential check of the reification")
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--seed", type=_seed, default=42)
    c.add_argument("--max-vars", type=int, default=10)
    c.add_argument("--max-clauses", type=int, default=30)
    c.add_argument("--max-width", type=int, default=4)
    c.add_argument("--assumptions-per-trial", type=int, default=5)
    c.add_argument("--exhaustive", metavar="FILE")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--flp", action="store_true",
                   help="also compare native and reified failed-literal probes")

    s = sub.add_parser("stats", help="compare reify output with closed form")
    s.add_argument("input")
    reify_flags(s)
    return p


def _read(path: str, stdin: TextIO) -> CnfFormula:
    if path == "-":
        text = stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    return normalize(parse_dimacs(text))


def _write(path: str, text: str, stdout: TextIO):
    if path == "-":
        stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _lits(lits) -> str:
    return " ".join(str(int(l)) for l in sorted(map(Literal.coerce, lits)))


def _options(args) -> ReifyOptions:
    return ReifyOptions(args.layers, args.inject, not args.no_conflict_var)


def cmd_reify(args, stdin, stdout, stderr) -> int:
    f = _read(args.input, stdin)
    psi, vmap = reify(f, _options(args))
    _write(args.output, serialize_dimacs(psi, vmap.comment_lines()), stdout)
    return EXIT_OK


def cmd_propagate(args, stdin, stdout, stderr) -> int:
    f = _read(args.input, stdin)
    for x in args.assume:
        if abs(x) > f.num_vars:
            raise UsageError(f"assumption {x} exceeds {f.num_vars} variables")
    if args.mode == "queue":
        res = propagate_queue(f, args.assume)
        if isinstance(res, Conflict):
            stdout.write("conflict\n")
            return EXIT_CONFLICT
        stdout.write(f"fixpoint: {_lits(res.literals())}".rstrip() + "\n")
        return EXIT_OK
    if args.mode == "rounds":
        trace = propagate_rounds(f, args.assume)
        if args.trace:
            for i, r in enumerate(trace.rounds, start=1):
                stdout.write(f"round {i}: {_lits(r)}\n")
        if trace.conflict:
            c = trace.conflict
            stdout.write(f"conflict: var {c.var or 0} round {c.round}\n")
            return EXIT_CONFLICT
        stdout.write("fixpoint\n")
        return EXIT_OK
    closure = decoupled_closure(f, args.assume, args.max_rounds)
    for i, r in enumerate(closure.rounds, start=1):
        stdout.write(f"round {i}: {_lits(v if p else -v for v, p in r)}\n")
    if closure.conflict_vars:
        vs = " ".join(map(str, sorted(closure.conflict_vars)))
        stdout.write(f"conflict: vars {vs} round "
                     f"{closure.first_conflict_round}\n")
        return EXIT_CONFLICT
    stdout.write("fixpoint\n")
    return EXIT_OK


def cmd_flp(args, stdin, stdout, stderr) -> int:
    f = _read(args.input, stdin)
    if args.all:
        lits = all_literals(f.num_vars)
    else:
        if abs(args.probe) > f.num_vars:
            raise UsageError(f"literal {args.probe} exceeds "
                             f"{f.num_vars} variables")
        lits = [Literal.from_int(args.probe)]
    agree = True
    for w in lits:
        parts = [str(w)]
        native = reified = None
        if args.via in ("native", "both"):
            native = probe_literal(f, w).failed
            parts.append(f"native={int(native)}")
        if args.via in ("reified", "both"):
            reified = simulate_flp(f, w).reified_derives_not_w
            parts.append(f"reified={int(reified)}")
        if native is not None and reified is not None and native != reified:
            agree = False
        stdout.write(" ".join(parts) + "\n")
    return EXIT_OK if agree else EXIT_MISMATCH


def cmd_gen(args, stdin, stdout, stderr) -> int:
    try:
        cfg = GenConfig(args.seed, args.vars, args.clauses, args.width,
                        args.allow_units)
    except ValueError as e:
        raise UsageError(str(e))
    f = gen_random_cnf(cfg)
    comment = (f"gen seed={args.seed} vars={args.vars} clauses={args.clauses} "
               f"width={args.width} units={int(args.allow_units)}")
    _write(args.output, serialize_dimacs(f, [comment]), stdout)
    return EXIT_OK


def _report(report: CheckReport, stdout: TextIO) -> int:
    stdout.write(f"trials: {report.trials}\nchecks: {report.checks}\n")
    for m in report.mismatches:
        stdout.write(f"mismatch trial={m.trial} seed={m.seed:#018x} "
                     f"kind={m.kind} assumptions=[{_lits(m.assumptions)}] "
                     f"{m.detail}\n".rstrip() + "\n")
    stdout.write("passed\n" if report.passed else
                 f"FAILED: {len(report.mismatches)} mismatches\n")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_check(args, stdin, stdout, stderr) -> int:
    if args.exhaustive:
        f = _read(args.exhaustive, stdin)
        try:
            report = exhaustive_check(f)
        except ValueError as e:
            raise UsageError(str(e))
        return _report(report, stdout)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    try:
        cfg = GenConfig(args.seed, args.max_vars, args.max_clauses,
                        args.max_width, allow_units=True)
    except ValueError as e:
        raise UsageError(str(e))
    report = differential_check(cfg, args.trials, args.assumptions_per_trial,
                                workers=args.jobs, flp=args.flp)
    return _report(report, stdout)


def cmd_stats(args, stdin, stdout, stderr) -> int:
    f = _read(args.input, stdin)
    opts = _options(args)
    psi, _ = reify(f, opts)
    want = expected_counts_for(f, opts)
    stdout.write(f"input: vars={f.num_vars} clauses={f.num_clauses} "
                 f"max_width={f.max_width()}\n")
    stdout.write(f"actual: clauses={psi.num_clauses} "
                 f"variables={psi.num_vars}\n")
    stdout.write(f"expected: clauses={want.clauses} "
                 f"variables={want.variables}\n")
    if (psi.num_clauses, psi.num_vars) != (want.clauses, want.variables):
        stdout.write("MISMATCH\n")
        return EXIT_MISMATCH
    return EXIT_OK


COMMANDS = {
    "reify": cmd_reify, "propagate": cmd_propagate, "flp": cmd_flp,
    "gen": cmd_gen, "check": cmd_check, "stats": cmd_stats,
}


def run(argv, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout,
        stderr: TextIO = sys.stderr) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, stdin, stdout, stderr)
    except UsageError as e:
        stderr.write(f"{e}\n")
        return EXIT_USAGE
    except (DimacsError, OSError) as e:
        stderr.write(f"cnfreify: {e}\n")
        return EXIT_PARSE
    except ReifyError as e:
        stderr.write(f"cnfreify: {e}\n")
        return EXIT_USAGE


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
