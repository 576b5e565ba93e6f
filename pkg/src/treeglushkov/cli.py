"""Command-line front end.

Exit codes: 0 success, 1 rejection or disagreement, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import export
from .automaton import run_tree
from .compressed import CompressedTreeAutomaton, run_compressed
from .constructions import ConstructionKind, construct, construct_general
from .expr import ExprSyntaxError, linearize, parse, validate
from .oracle import EnumerationBound, cross_validate, enumerate_language, random_expression
from .positions import position_table
from .trees import TreeSyntaxError, parse_tree


class UsageError(Exception):
    pass


def _read_expression(text: str):
    if text == "-":
        text = sys.stdin.read().strip()
    try:
        e = parse(text)
    except ExprSyntaxError as err:
        raise UsageError(f"syntax error: {err}") from err
    problems = validate(e)
    if problems:
        raise UsageError("invalid expression: " + "; ".join(problems))
    return e


def _automaton(args, e):
    kind = ConstructionKind(args.construction)
    if args.general:
        return construct_general(kind, e)
    return construct(kind, linearize(e))


def cmd_build(args) -> int:
    a = _automaton(args, _read_expression(args.expression))
    if args.format == "json":
        print(export.to_json(a))
    elif args.format == "dot":
        sys.stdout.write(export.to_dot(a, name=args.construction))
    else:
        sys.stdout.write(export.to_text(a))
    return 0


def cmd_run(args) -> int:
    e = _read_expression(args.expression)
    args.general = not args.linear
    a = _automaton(args, e)
    trees = args.tree or [line.strip() for line in sys.stdin if line.strip()]
    if not trees:
        raise UsageError("no trees given (use --tree or standard input)")
    status = 0
    for text in trees:
        try:
            t = parse_tree(text, a.alphabet)
        except TreeSyntaxError as err:
            raise UsageError(f"tree syntax error in {text!r}: {err}") from err
        if isinstance(a, CompressedTreeAutomaton):
            reached = run_compressed(a, t)
        else:
            reached = run_tree(a, t)
        accepted = not reached.isdisjoint(a.finals)
        status = status if accepted else 1
        states = "{" + ",".join(sorted(reached)) + "}"
        print(f"{'accept' if accepted else 'reject'}\t{states}\t{t}")
    return status


def cmd_positions(args) -> int:
    lin = linearize(_read_expression(args.expression))
    table = position_table(lin)
    if args.format == "json":
        data = {"expression": str(lin), **table.to_json()}
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(f"expression  {lin}")
        print(table.to_text())
    return 0


def cmd_enumerate(args) -> int:
    e = _read_expression(args.expression)
    target = linearize(e) if args.linear else e
    trees = enumerate_language(target, EnumerationBound(args.max_nodes))
    for t in sorted(trees, key=lambda t: (t.size, str(t))):
        print(t)
    return 0


def cmd_check(args) -> int:
    bound = EnumerationBound(args.max_nodes)
    if args.expression is not None:
        cases = [("-", _read_expression(args.expression))]
    else:
        cases = [
            (seed, random_expression(seed, args.max_positions))
            for seed in range(args.seed_start, args.seed_start + args.seed_count)
        ]
    failures = 0
    total = 0
    start = time.perf_counter()
    print(f"{'seed':>6}  report")
    for seed, e in cases:
        report = cross_validate(e, bound, exhaustive=args.exhaustive)
        total += report.trees_checked
        failures += not report.ok
        if args.verbose or not report.ok:
            print(f"{seed!s:>6}  {report.summary()}")
    elapsed = time.perf_counter() - start
    print(
        f"checked {len(cases)} expression(s), {total} trees up to {args.max_nodes} nodes, "
        f"{failures} disagreement(s) in {elapsed:.1f}s"
    )
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="treeglushkov",
        description="Bottom-up Position and Father tree automata from regular tree expressions.",
    )
    sub = p.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in ConstructionKind]

    b = sub.add_parser("build", help="construct an automaton")
    b.add_argument("expression", help="expression text, or - for standard input")
    b.add_argument("--construction", choices=kinds, default="position")
    b.add_argument("--general", action="store_true", help="strip position indices (apply h)")
    b.add_argument("--format", choices=["json", "dot", "text"], default="text")
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("run", help="test trees for membership")
    r.add_argument("expression")
    r.add_argument("--construction", choices=kinds, default="position")
    r.add_argument("--tree", action="append", help="tree such as f(g(a),b); repeatable")
    r.add_argument(
        "--linear", action="store_true", help="run the indexed automaton (trees use f1, g2, ...)"
    )
    r.set_defaults(func=cmd_run)

    q = sub.add_parser("positions", help="print Root and Father of the linearized expression")
    q.add_argument("expression")
    q.add_argument("--format", choices=["json", "text"], default="text")
    q.set_defaults(func=cmd_positions)

    c = sub.add_parser("check", help="cross-validate constructions against enumeration")
    c.add_argument("expression", nargs="?", help="check one expression instead of random ones")
    c.add_argument("--seed-count", type=int, default=200)
    c.add_argument("--seed-start", type=int, default=0)
    c.add_argument("--max-nodes", type=int, default=9)
    c.add_argument("--max-positions", type=int, default=6)
    c.add_argument("--exhaustive", action="store_true", help="check trees one at a time")
    c.add_argument("-v", "--verbose", action="store_true")
    c.set_defaults(func=cmd_check)

    n = sub.add_parser("enumerate", help="list the language up to a node bound")
    n.add_argument("expression")
    n.add_argument("--max-nodes", type=int, default=9)
    n.add_argument("--linear", action="store_true")
    n.set_defaults(func=cmd_enumerate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"treeglushkov: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
