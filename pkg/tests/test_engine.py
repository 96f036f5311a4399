import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmc.engine import (Verdict, check_global, check_partial, formula_graph, satisfying_states,
                        select_next)
from pmc.generators import random_delta_formula, random_formula, random_network
from pmc.lts import parse_aut
from pmc.mucalc import AlternationError, parse_formula
from pmc.network import INACTIVE, Network, SyncRule, alphabet

from conftest import fixture_path, lts

IDLE = INACTIVE


def single(m):
    labels = sorted({a for _, a, _ in m.transitions})
    return Network((m,), tuple(SyncRule((a,), a) for a in labels))


def read_formula(*parts):
    with open(fixture_path(*parts), encoding="utf-8") as fh:
        return parse_formula(fh.read())


def test_true_holds_everywhere():
    n = single(lts(1))
    assert check_partial(n, parse_formula("true")).value is True
    assert check_global(n, parse_formula("true"))


def test_deadlock_has_no_move():
    n = single(lts(1))
    f = parse_formula('<"a"> true')
    assert check_global(n, f) is False
    v = check_partial(n, f)
    assert v.value is False
    assert str(v) == "FALSE"


def test_fair_reachability():
    m = lts(2, (0, "b", 1), (1, "b", 0), (1, "a", 1))
    f = parse_formula('nu X . ((mu Y . (<"a"> true or <any> Y)) and [not("a")] X)')
    assert satisfying_states(m, f) == {0, 1}
    assert check_partial(single(m), f).value is True
    m2 = lts(2, (0, "b", 1), (1, "b", 0), (0, "a", 0), (1, "c", 1))
    assert satisfying_states(m2, f) == {0, 1}
    m3 = lts(3, (0, "b", 1), (1, "b", 2), (2, "b", 2), (0, "a", 0))
    assert satisfying_states(m3, f) == set()


def test_box_and_diamond_on_branching():
    m = lts(3, (0, "a", 1), (0, "a", 2), (1, "b", 1))
    assert satisfying_states(m, parse_formula('<"a"> <"b"> true')) == {0}
    assert satisfying_states(m, parse_formula('["a"] <"b"> true')) == {1, 2}


def test_regular_diamond_and_delta():
    m = lts(3, (0, "a", 1), (1, "b", 2), (2, "c", 0))
    assert satisfying_states(m, parse_formula('<"a" . "b"> true')) == {0}
    assert satisfying_states(m, parse_formula('<"a" . "b" . "c"> @')) == {0}
    assert satisfying_states(m, parse_formula('<any> @')) == {0, 1, 2}
    assert satisfying_states(m, parse_formula('<"a" . "c"> @')) == set()
    assert satisfying_states(m, parse_formula('<"a"*> @')) == {0, 1, 2}


def test_select_sole_participant():
    p = lts(2, (0, "a", 1))
    n = Network((p, p, p), (SyncRule((IDLE, "a", IDLE), "x"), SyncRule(("a", IDLE, IDLE), "y")))
    g = formula_graph(parse_formula('<"x"> true'), alphabet(n))
    assert select_next(n, g) == 2


def test_select_symmetric_takes_first():
    p = lts(2, (0, "a", 1))
    n = Network((p, p), (SyncRule(("a", "a"), "x"),))
    g = formula_graph(parse_formula('<"x"> true'), alphabet(n))
    assert select_next(n, g) == 1
    assert select_next(n, g, "last") == 2
    assert select_next(n, g, "fixed") == 1
    assert select_next(n, g, "random", random.Random(5)) in (1, 2)


def test_select_prefers_smaller_on_tie():
    small, big = lts(1, (0, "a", 0)), lts(3, (0, "a", 1), (1, "a", 2))
    n = Network((big, small), (SyncRule(("a", IDLE), "x"), SyncRule((IDLE, "a"), "x")))
    g = formula_graph(parse_formula('<"x"> true'), alphabet(n))
    assert select_next(n, g) == 2


def test_unknown_policy():
    n = single(lts(1))
    with pytest.raises(ValueError):
        select_next(n, formula_graph(parse_formula("true"), alphabet(n)), "best")


def test_alternating_formula_rejected():
    n = single(lts(2, (0, "a", 1), (1, "b", 0)))
    f = parse_formula('nu X . mu Y . (<"a"> X or <"b"> Y)')
    with pytest.raises(AlternationError):
        check_partial(n, f)
    assert check_global(n, f) in (True, False)


def test_trio(trio):
    f = read_formula("trio", "formula.mcl")
    assert check_partial(trio, f).value == check_global(trio, f)


def test_semaphore_fairness(semaphore):
    f = read_formula("semaphore", "fairness.mcl")
    assert check_global(semaphore, f) is True
    v = check_partial(semaphore, f)
    assert v.value is True
    assert [s.component for s in v.steps] == ["P1", "S"]
    assert v.stopped_early and v.remaining == ("P0",)
    assert v.steps[-1].simplified == (2, 1)


def test_empty_formula_graph_steps():
    n = single(lts(2, (0, "a", 1)))
    v = check_partial(n, parse_formula("false"))
    assert v == Verdict(False, (), True, ("P1",), (1, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_single_component_equals_global(seed):
    rng = random.Random(seed)
    m = random_network(rng, max_components=1).components[0]
    n = single(m) if m.transitions else single(lts(1))
    f = random_formula(rng)
    assert check_partial(n, f).value == check_global(n, f)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_policies_agree(seed):
    rng = random.Random(seed)
    n = random_network(rng)
    f = random_delta_formula(rng) if seed % 3 == 0 else random_formula(rng)
    expected = check_global(n, f)
    for policy in ("smart", "fixed", "last", "random"):
        assert check_partial(n, f, policy=policy, seed=seed).value == expected, policy


def test_on_step_callback(trio):
    seen = []
    f = parse_formula('<"a"> <"b"> true')
    v = check_partial(trio, f, on_step=lambda step, report: seen.append((step, report.verdict)))
    assert [s for s, _ in seen] == list(v.steps)


def test_parse_aut_fixture_sizes():
    with open(fixture_path("semaphore", "S.aut"), encoding="utf-8") as fh:
        s = parse_aut(fh.read())
    assert (s.num_states, len(s.transitions)) == (3, 4)
