"""Command-line front end.

Exit codes: 0 true or success, 1 false, 2 usage or input error, 3 state
space cap exceeded. Results go to stdout, diagnostics to stderr.
"""

import argparse
import os
import sys

from .engine import POLICIES, check_global, check_partial, formula_graph
from .fgraph import quotient
from .lts import AutFormatError, parse_aut, strong_bisim_reduce, tau_star_a_reduce, write_aut
from .mucalc import AlternationError, FormulaSyntaxError, MonotonicityError, parse_formula
from .network import (NetFormatError, StateSpaceTooLarge, alphabet, extract_subnetwork,
                      format_rule, load_net, product)
from .simplify import format_table, simplify_pipeline

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def _load_aut(path):
    try:
        return parse_aut(_read(path))
    except AutFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_net(path):
    try:
        return load_net(path)
    except (AutFormatError, NetFormatError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def _load_formula(path):
    try:
        return parse_formula(_read(path))
    except (FormulaSyntaxError, MonotonicityError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _net_paths(path):
    for raw in _read(path).split("\n"):
        line = raw.split("#", 1)[0].strip()
        if line:
            return line.split()[1:]
    return []


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _component(n, i):
    if not 1 <= i <= n.size:
        raise InputError(f"component index {i} out of range 1..{n.size}")
    return i


def cmd_check(args):
    n = _load_net(args.net)
    f = _load_formula(args.formula)
    if args.mode == "global":
        value = check_global(n, f, max_states=args.max_states)
        print("TRUE" if value else "FALSE")
        return EXIT_TRUE if value else EXIT_FALSE
    rows = []

    def on_step(step, report):
        rows.append((f"quotient {step.component}", *map(str, step.quotient)))
        rows.append(("simplified", *map(str, step.simplified)))

    verdict = check_partial(n, f, policy=args.order, seed=args.seed,
                            max_states=args.max_states, on_step=on_step)
    print(verdict)
    if args.verbose:
        table = [("Step", "States", "Transitions"), ("formula", *map(str, verdict.initial))] + rows
        sys.stdout.write(format_table(table))
        if verdict.stopped_early:
            print("not quotiented: " + ", ".join(verdict.remaining))
    return EXIT_TRUE if verdict.value else EXIT_FALSE


def cmd_product(args):
    n = _load_net(args.net)
    _emit(write_aut(product(n, max_states=args.max_states)), args.output)
    return EXIT_TRUE


def cmd_quotient(args):
    n = _load_net(args.net)
    i = _component(n, args.component)
    g = _load_aut(args.graph) if args.graph else formula_graph(_load_formula(args.formula), alphabet(n))
    q, _ = quotient(g, n, i, max_states=args.max_states)
    _emit(write_aut(q), args.output)
    return EXIT_TRUE


def cmd_simplify(args):
    g = _load_aut(args.graph)
    out, report = simplify_pipeline(g)
    _emit(write_aut(out), args.output)
    if args.report:
        stream = sys.stdout if args.output else sys.stderr
        stream.write(report.table())
        stream.write(f"passes {report.passes}, verdict {report.verdict}\n")
    return EXIT_TRUE


def cmd_reduce(args):
    g = _load_aut(args.aut)
    if args.strong:
        out = strong_bisim_reduce(g)
    else:
        labels = [x.strip() for x in args.tau_a.split(",") if x.strip()]
        out = tau_star_a_reduce(g, labels)
    _emit(write_aut(out), args.output)
    return EXIT_TRUE


def cmd_subnet(args):
    n = _load_net(args.net)
    i = _component(n, args.component)
    if n.size < 2:
        raise InputError("sub-network extraction needs at least two components")
    sub, interface = extract_subnetwork(n, i)
    paths = _net_paths(args.net)
    lines = ["lts " + " ".join(paths[:i - 1] + paths[i:])]
    lines += [format_rule(r) for r in sub.rules]
    lines.append(f"# interface of {n.names[i - 1]} with the sub-network")
    lines += ["# " + format_rule(r) for r in interface]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_TRUE


def build_parser():
    p = argparse.ArgumentParser(prog="pmc", description="Partial model checking of mu-calculus formulas on networks of LTSs.")
    sub = p.add_subparsers(dest="command", required=True)

    def cap(sp):
        sp.add_argument("--max-states", type=int, default=10**6, help="state cap for products (default 10^6)")

    c = sub.add_parser("check", help="check a formula on a network")
    c.add_argument("--net", required=True)
    c.add_argument("--formula", required=True)
    mode = c.add_mutually_exclusive_group()
    mode.add_argument("--global", dest="mode", action="store_const", const="global")
    mode.add_argument("--partial", dest="mode", action="store_const", const="partial")
    c.set_defaults(mode="partial")
    c.add_argument("--order", choices=POLICIES, default="smart")
    c.add_argument("--seed", type=int, default=0, help="seed for --order random")
    c.add_argument("--verbose", action="store_true", help="print the step table")
    cap(c)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("product", help="write the global LTS of a network")
    c.add_argument("--net", required=True)
    c.add_argument("-o", "--output")
    cap(c)
    c.set_defaults(func=cmd_product)

    c = sub.add_parser("quotient", help="quotient a formula graph by one component")
    c.add_argument("--net", required=True)
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--formula")
    src.add_argument("--graph", help="formula graph in .aut form")
    c.add_argument("--component", type=int, required=True, help="1-based component index")
    c.add_argument("-o", "--output")
    cap(c)
    c.set_defaults(func=cmd_quotient)

    c = sub.add_parser("simplify", help="simplify a formula graph")
    c.add_argument("--graph", required=True)
    c.add_argument("-o", "--output")
    c.add_argument("--report", action="store_true")
    c.set_defaults(func=cmd_simplify)

    c = sub.add_parser("reduce", help="reduce an LTS")
    c.add_argument("--aut", required=True)
    how = c.add_mutually_exclusive_group(required=True)
    how.add_argument("--strong", action="store_true")
    how.add_argument("--tau-a", metavar="LABELS", help="comma-separated internal labels")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_reduce)

    c = sub.add_parser("subnet", help="print the environment of one component")
    c.add_argument("--net", required=True)
    c.add_argument("--component", type=int, required=True, help="1-based component index")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_subnet)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_TRUE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"pmc: error: {exc}", file=sys.stderr)
    except (AlternationError, ValueError, IndexError) as exc:
        print(f"pmc: error: {exc}", file=sys.stderr)
    except StateSpaceTooLarge as exc:
        print(f"pmc: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"pmc: error: {os.fsdecode(exc.filename or '')}: {exc.strerror}", file=sys.stderr)
    return EXIT_INPUT
