"""One pass through the pipeline on the three-process network in
fixtures/trio, printing each intermediate object.

    python3 demos/walkthrough.py
"""

import os

from pmc import (check_global, check_partial, decode, encode, expand_regular, extract_subnetwork,
                 load_net, parse_formula, prepare, show)
from pmc.fgraph import build_quotient_network, quotient
from pmc.lts import write_aut
from pmc.network import alphabet, format_rule
from pmc.simplify import simplify_pipeline

HERE = os.path.dirname(os.path.abspath(__file__))
TRIO = os.path.join(HERE, os.pardir, "fixtures", "trio", "network.net")


def heading(text):
    print()
    print(text)
    print("-" * len(text))


def main():
    net = load_net(TRIO)

    heading("environment of P3")
    sub, interface = extract_subnetwork(net, 3)
    for r in sub.rules:
        print(" ", format_rule(r))
    print("  interface:")
    for r in interface:
        print("   ", format_rule(r))

    formula = parse_formula('mu X . <"a"> not false or <"b"> X')
    heading("formula graph of " + show(formula))
    graph = encode(prepare(formula, alphabet(net)))
    print(write_aut(graph), end="")

    heading("quotient network for P3")
    for r in build_quotient_network(graph, net, 3).rules:
        print(" ", format_rule(r))

    heading("quotient by P3, then simplified")
    q, _ = quotient(graph, net, 3)
    g, report = simplify_pipeline(q)
    print(report.table(), end="")
    print("  reads as:", show(decode(g)))

    heading("a least fixpoint with no way out")
    f = parse_formula('mu X . (<"a"> mu Y . <"b"> X) or <"c"> X')
    g, report = simplify_pipeline(encode(prepare(f, ["a", "b", "c"])))
    print(f"  {show(f)}  ->  {report.verdict} ({g.num_states} state)")

    heading("infinite looping")
    delta = parse_formula('<("a" | "b")* . "c"> @')
    print(f"  {show(delta)}  expands to  {show(expand_regular(delta))}")
    # the trio product has no cycle, so no infinite run exists at all
    print(f"  on the network: partial {check_partial(net, delta)}, "
          f"global {'TRUE' if check_global(net, delta) else 'FALSE'}")


if __name__ == "__main__":
    main()
