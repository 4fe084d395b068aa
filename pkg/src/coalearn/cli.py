"""Command line interface.

Subcommands::

    coalearn learn    --teacher FILE [--output FILE] [--dot FILE] [--trace FILE]
                      [--check-invariants] [--max-outer-iterations N]
    coalearn minimize --input FILE [--output FILE] [--dot FILE]
    coalearn equiv    LEFT RIGHT
    coalearn eval     --teacher FILE --state NAME --test TEST

Exit status: 0 on success, 1 on bad input, 2 on an internal invariant
violation.  File arguments that do not exist are looked up among the bundled
examples (``mod3.json``, ``paper_lts.json``).
"""
from __future__ import annotations

import argparse
import sys as _sys
from pathlib import Path

from .exceptions import CoalearnError, InvariantViolation
from .io import export_dot, export_system, load_system
from .learner import LearnConfig, learn
from .logic import eval_test, format_test, parse_test
from .reachability import logical_quotient, reachable_subsystem
from .systems import rename_states
from .teacher import Teacher

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


def _format_value(value):
    return str(value).lower() if isinstance(value, bool) else str(value)


def cmd_learn(args, out):
    teacher = Teacher(load_system(args.teacher))
    config = LearnConfig(
        check_invariants=args.check_invariants,
        max_outer_iterations=args.max_outer_iterations,
    )
    conj, trace = learn(teacher, config)
    names = {x: f"s{i}" for i, x in enumerate(conj.states)}
    learned = rename_states(conj, names)
    trace.add("naming", names={v: k for k, v in names.items()})
    text = export_system(learned)
    if args.output:
        _write(args.output, text)
    else:
        out.write(text)
    if args.dot:
        _write(args.dot, export_dot(learned, "learned"))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            trace.write_ndjson(fh)
    out.write(f"states: {len(learned.states)}\n")
    for key, value in teacher.counters().items():
        out.write(f"{key}: {value}\n")
    return EXIT_OK


def cmd_minimize(args, out):
    sys = reachable_subsystem(load_system(args.input))
    _, quotient = logical_quotient(sys)
    text = export_system(quotient)
    if args.output:
        _write(args.output, text)
    else:
        out.write(text)
    if args.dot:
        _write(args.dot, export_dot(quotient, "minimized"))
    out.write(f"states: {len(quotient.states)}\n")
    return EXIT_OK


def cmd_equiv(args, out):
    teacher = Teacher(load_system(args.left))
    answer = teacher.equivalence_query(load_system(args.right))
    if answer.correct:
        out.write("CORRECT\n")
    else:
        out.write(f"counterexample: {format_test(answer.counterexample)}\n")
    return EXIT_OK


def cmd_eval(args, out):
    sys = load_system(args.teacher)
    test = parse_test(args.test, sys)
    out.write(_format_value(eval_test(sys, args.state, test)) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coalearn",
        description="Learn minimal reachable DFAs, Mealy machines and LTSs from a teacher system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="run the learning loop against a teacher system")
    p.add_argument("--teacher", required=True, help="teacher system document")
    p.add_argument("--output", help="write the learned system here (default: stdout)")
    p.add_argument("--dot", help="write a Graphviz rendering of the learned system")
    p.add_argument("--trace", help="write the run trace as newline-delimited JSON")
    p.add_argument("--check-invariants", action="store_true")
    p.add_argument("--max-outer-iterations", type=int, default=None)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("minimize", help="logical quotient of the reachable part")
    p.add_argument("--input", "--teacher", dest="input", required=True)
    p.add_argument("--output")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("equiv", help="compare two systems at their initial states")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("eval", help="evaluate a test at a state")
    p.add_argument("--teacher", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--test", required=True, help='word such as "aa" or formula such as "<a><b>T"')
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None, out=None) -> int:
    out = out or _sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=_sys.stderr)
        return EXIT_INTERNAL
    except (CoalearnError, OSError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
