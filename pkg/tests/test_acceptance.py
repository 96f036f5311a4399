"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line with its timing;
the lines are repeated in the terminal summary. Run standalone with
``python3 tests/test_acceptance.py`` to see only those lines.
"""

import random
import time

import networkx as nx

from pmc.bes import Solver, naive_solve, solve_with_cycles
from pmc.engine import check_global, check_partial
from pmc.fgraph import build_quotient_network, decode, encode
from pmc.generators import (random_bes, random_delta_formula, random_formula, random_marked_bes, random_network)
from pmc.lts import is_strongly_bisimilar
from pmc.mucalc import (Choice, Concat, Delta, Dia, Mu, Nu, Or, Star, Atom, Var, alpha_equivalent,
                        expand_regular, parse_formula, prepare, semantically_equal)
from pmc.network import Network, extract_subnetwork, load_net, product
from pmc.simplify import FF, simplify_pipeline

from conftest import fixture_path

RESULTS = []


def report(number, title, ok, elapsed, limit, detail=""):
    ok = ok and elapsed < limit
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f}s, limit {limit}s){detail}"
    RESULTS.append(line)
    print(line)
    return ok


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def trio():
    return load_net(fixture_path("trio", "network.net"))


def test_criterion_01_subnetwork_extraction():
    sub, elapsed = timed(lambda: extract_subnetwork(trio(), 3)[0])
    got = {str(r) for r in sub.rules}
    want = {"((a, a), a)", "((a, •), %sync.1.a)", "((b, b), %sync.2.b)", "((c, c), tau)"}
    assert report(1, "sub-network extraction", got == want and len(sub.rules) == 4, elapsed, 1)


def test_criterion_02_quotient_rules():
    def run():
        g = encode(prepare(parse_formula('mu X . <"a"> not false or <"b"> X'), ["a", "b", "c", "d", "tau"]))
        return build_quotient_network(g, trio(), 3)
    n, elapsed = timed(run)
    got = {str(r) for r in n.rules}
    want = {"((%not, •), %not)", "((%or, •), %or)", "((%mu.0, •), %mu.0)",
            "((%dia.a, •), %dia.a)", "((%dia.a, a), %dia.%sync.1.a)", "((%dia.b, b), %dia.%sync.2.b)"}
    assert report(2, "quotient-network rules", got == want, elapsed, 1)


def test_criterion_03_constant_evaluation():
    def run():
        f = parse_formula('mu X . (<"a"> mu Y . <"b"> X) or <"c"> X')
        return simplify_pipeline(encode(prepare(f, ["a", "b", "c"])))
    (g, rep), elapsed = timed(run)
    ok = rep.verdict == FF and g.num_states == 1 and not g.transitions
    assert report(3, "constant evaluation to FF", ok, elapsed, 1)


def test_criterion_04_delta_expansion():
    def run():
        return expand_regular(Delta(Concat(Star(Choice(Atom("a"), Atom("b"))), Atom("c"))))
    f, elapsed = timed(run)
    want = Nu("X", Mu("Y", Or(Dia("c", Var("X", marked=True)),
                              Or(Dia("a", Var("Y")), Dia("b", Var("Y"))))), marked=True)
    assert report(4, "delta expansion", alpha_equivalent(f, want), elapsed, 1)


def test_criterion_05_semaphore():
    def run():
        n = load_net(fixture_path("semaphore", "semaphore.net"))
        with open(fixture_path("semaphore", "fairness.mcl"), encoding="utf-8") as fh:
            return check_partial(n, parse_formula(fh.read()))
    v, elapsed = timed(run)
    ok = v.value is True and v.stopped_early and v.remaining == ("P0",)
    steps = " -> ".join(s.component for s in v.steps)
    assert report(5, "semaphore fairness", ok, elapsed, 5, f" steps {steps}, left {', '.join(v.remaining)}")


def test_criterion_06_end_to_end_soundness():
    def run():
        bad, count, stepped = [], 0, 0
        rng = random.Random(2024)
        cases = [("plain", random_formula)] * 500 + [("delta", random_delta_formula)] * 100
        for k, (kind, gen) in enumerate(cases):
            n = random_network(rng)
            f = gen(rng)
            v = check_partial(n, f)
            count += 1
            stepped += bool(v.steps)
            if v.value != check_global(n, f):
                bad.append((kind, k))
        return count, stepped, bad
    (count, stepped, bad), elapsed = timed(run)
    assert report(6, "check_partial = check_global", not bad, elapsed, 120,
                  f" {count} instances ({stepped} needing a quotient), {len(bad)} disagreements")


def test_criterion_07_encoding_soundness():
    def run():
        rng = random.Random(7)
        failures = 0
        for k in range(100):
            phi = prepare(random_formula(rng, depth=5), ["a", "b", "c"])
            if not semantically_equal(decode(encode(phi)), phi, samples=20, seed=k):
                failures += 1
        return failures
    failures, elapsed = timed(run)
    assert report(7, "decode(encode(f)) = f", failures == 0, elapsed, 60, f" 100 formulas, {failures} failures")


def lasso_oracle(b, target):
    graph = nx.DiGraph()
    for x, rhs in b.rhs.items():
        graph.add_node(x)
        graph.add_edges_from((x, a) for a in rhs.args)
    reach = nx.descendants(graph, target) | {target}
    if any(b.rhs[x].op == "and" and not b.rhs[x].args for x in reach):
        return True
    return any(any(x.marked for x in cyc) for cyc in nx.simple_cycles(graph.subgraph(reach)))


def test_criterion_08_bes_solvers():
    def run():
        rng = random.Random(8)
        bad = 0
        for _ in range(200):
            b = random_bes(rng, n_vars=rng.randint(1, 20), n_blocks=rng.randint(1, 3))
            expected = naive_solve(b)
            solver = Solver(b)
            bad += any(solver.solve(x) != expected[x] for x in b.variables)
        for _ in range(100):
            b = random_marked_bes(rng, n_vars=rng.randint(1, 10))
            bad += any(solve_with_cycles(b, x) != lasso_oracle(b, x) for x in b.variables)
        return bad
    bad, elapsed = timed(run)
    assert report(8, "BES solver cross-validation", bad == 0, elapsed, 30, f" 300 systems, {bad} disagreements")


def test_criterion_09_recomposition():
    def run():
        rng = random.Random(9)
        done = failures = 0
        while done < 100:
            n = random_network(rng)
            if n.size < 2:
                continue
            i = rng.randint(1, n.size)
            sub, interface = extract_subnetwork(n, i)
            whole = Network((n.components[i - 1], product(sub)), interface)
            failures += not is_strongly_bisimilar(product(n), product(whole))
            done += 1
        return failures
    failures, elapsed = timed(run)
    assert report(9, "recomposition is bisimilar", failures == 0, elapsed, 60, f" 100 networks, {failures} failures")


def test_criterion_10_industrial_tables():
    # the memory tables need component LTSs that are not available; the
    # qualitative claim (a constant before all components are quotiented)
    # is what can be checked, and it is the semaphore run of criterion 5
    def run():
        n = load_net(fixture_path("semaphore", "semaphore.net"))
        with open(fixture_path("semaphore", "fairness.mcl"), encoding="utf-8") as fh:
            return check_partial(n, parse_formula(fh.read()))
    v, elapsed = timed(run)
    line = "criterion 10: N/A (not reproducible at desk scale)"
    line += f"; early stop {'PASS' if v.stopped_early else 'FAIL'}"
    RESULTS.append(line)
    print(line)
    assert v.stopped_early


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
