"""Mutual exclusion with a semaphore: fairness checked compositionally.

Two processes P0 and P1 share a semaphore S. The property says that from the
start, P1 can repeatedly request and enter its critical section while P0
stays idle. The compositional checker settles it after quotienting P1 and S,
without ever looking at P0.

    python3 demos/semaphore.py
"""

import os
import time

from pmc import check_global, check_partial, load_net, parse_formula, product
from pmc.simplify import format_table

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURE = os.path.join(HERE, os.pardir, "fixtures", "semaphore")


def main():
    net = load_net(os.path.join(FIXTURE, "semaphore.net"))
    with open(os.path.join(FIXTURE, "fairness.mcl"), encoding="utf-8") as fh:
        formula = parse_formula(fh.read())
    print("components:", ", ".join(f"{n} ({c.num_states} states)" for n, c in zip(net.names, net.components)))
    print("global product:", product(net).num_states, "states")

    rows = [("Step", "States", "Transitions")]
    start = time.perf_counter()
    verdict = check_partial(net, formula, on_step=lambda step, report: rows.extend([
        (f"quotient {step.component}", *map(str, step.quotient)),
        ("simplified", *map(str, step.simplified))]))
    elapsed = time.perf_counter() - start
    rows.insert(1, ("formula", *map(str, verdict.initial)))
    print()
    print(format_table(rows), end="")
    print()
    print(f"partial: {verdict} in {elapsed * 1000:.1f} ms, never quotiented: {', '.join(verdict.remaining)}")
    print(f"global:  {'TRUE' if check_global(net, formula) else 'FALSE'}")


if __name__ == "__main__":
    main()
