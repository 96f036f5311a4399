import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmc.engine import check_global, satisfying_states
from pmc.fgraph import (build_quotient_network, check_formula_graph, decode, encode, parse_label,
                        quotient)
from pmc.generators import LABELS, random_formula, random_lts, random_network
from pmc.lts import Lts, parse_aut, write_aut
from pmc.mucalc import (FF, Dia, Mu, Not, Or, Var, alpha_equivalent, parse_formula, prepare, semantically_equal)
from pmc.network import INACTIVE, Network, SyncRule, alphabet, product
from pmc.simplify import simplify_pipeline

from conftest import lts

AB_FORMULA = 'mu X . <"a"> not false or <"b"> X'


def graph_of(text, labels=("a", "b", "c")):
    return encode(prepare(parse_formula(text), labels))


def as_nx(g):
    m = nx.MultiDiGraph()
    m.add_nodes_from(g.reachable_states())
    reach = set(m.nodes)
    m.add_edges_from((s, t, {"label": a}) for s, a, t in g.transitions if s in reach)
    return m


def isomorphic(g1, g2):
    return nx.is_isomorphic(as_nx(g1), as_nx(g2), edge_match=lambda x, y: (
        sorted(d["label"] for d in x.values()) == sorted(d["label"] for d in y.values())))


def test_encode_exact_graph():
    assert graph_of(AB_FORMULA) == lts(
        7,
        (0, "%mu.0", 1), (1, "%or", 2), (1, "%or", 5), (2, "%dia.a", 3),
        (3, "%not", 4), (5, "%dia.b", 6), (6, "%or", 0))


def test_ff_is_one_deadlock():
    assert encode(FF()) == lts(1)


def test_encode_shares_identical_subterms():
    g = graph_of('<"a"> true or <"b"> true')
    # the two copies of "not false" share one state
    assert sum(1 for _, a, _ in g.transitions if a == "%not") == 1


def test_encode_rejects_raw_formulas():
    with pytest.raises(ValueError):
        encode(parse_formula('[\"a\"] false'))
    with pytest.raises(ValueError):
        encode(Mu("X", Var("X")))


def test_decode_exact_graph():
    f = decode(graph_of(AB_FORMULA))
    assert alpha_equivalent(f, Mu("X", Or(Dia("a", Not(FF())), Dia("b", Var("X", 0))), 0))


def test_decode_deadlock():
    assert decode(lts(1)) == FF()


def test_decode_quotient_shape():
    g = lts(6, (0, "%or", 1), (0, "%or", 2), (0, "%or", 3), (1, "%dia.a", 4), (2, "%dia.x", 4),
            (3, "%dia.y", 1), (4, "%not", 5))
    expected = parse_formula('<"a"> true or <"x"> true or <"y"> <"a"> true')
    assert semantically_equal(decode(g), expected)


def test_labels_round_trip_through_aut():
    g = graph_of('nu X . ([any] X and <"a"> true)')
    assert parse_aut(write_aut(g)) == g


def test_parse_label():
    assert parse_label("%mu@.3") == ("mu", (3, True))
    assert parse_label("%dia.%sync.1.a") == ("dia", "%sync.1.a")
    with pytest.raises(ValueError):
        parse_label("a")


def test_or_cycle_violates_condition_3a():
    g = lts(2, (0, "%or", 1), (1, "%or", 0))
    assert any(p.startswith("(3a)") for p in check_formula_graph(g))


def test_parity_violation():
    g = lts(2, (0, "%mu.1", 1))
    assert any(p.startswith("(2)") for p in check_formula_graph(g))


def test_bad_label():
    assert check_formula_graph(lts(2, (0, "a", 1)))[0].startswith("(1)")


def test_first_mu_must_be_lowest_block():
    # entering the circuit at state 0 meets block 2 before block 0
    g = lts(4, (0, "%mu.2", 1), (1, "%not", 2), (2, "%not", 3), (3, "%mu.0", 0))
    assert any(p.startswith("(3b)") for p in check_formula_graph(g))


def test_quotient_network_rules(trio):
    n = build_quotient_network(graph_of(AB_FORMULA), trio, 3)
    assert {str(r) for r in n.rules} == {
        "((%not, •), %not)", "((%or, •), %or)", "((%mu.0, •), %mu.0)",
        "((%dia.a, •), %dia.a)", "((%dia.a, a), %dia.%sync.1.a)", "((%dia.b, b), %dia.%sync.2.b)"}


def test_trio_quotient_simplified(trio):
    q, sub = quotient(graph_of(AB_FORMULA), trio, 3)
    assert check_formula_graph(q) == []
    g, _ = simplify_pipeline(q)
    expected = parse_formula('<"a"> true or <"%sync.1.a"> true or <"%sync.2.b"> <"a"> true')
    assert semantically_equal(decode(g), expected)
    assert sub.names == ("P1", "P2")


def test_uninvolved_component_is_pass_through():
    p = lts(2, (0, "a", 1))
    n = Network((p, lts(1)), (SyncRule(("a", INACTIVE), "a"), SyncRule(("b", INACTIVE), "b")))
    g = graph_of(AB_FORMULA)
    q = build_quotient_network(g, n, 2)
    assert {r.vector[1] for r in q.rules} == {INACTIVE}
    assert isomorphic(product(q), g)


def test_stuttering_component_renames_modalities():
    p = lts(1, (0, "a", 0), (0, "b", 0))
    other = lts(2, (0, "a", 1), (1, "b", 0))
    n = Network((p, other), (SyncRule(("a", "a"), "a"), SyncRule(("b", "b"), "b")))
    g = graph_of(AB_FORMULA)
    q, _ = quotient(g, n, 1)
    renamed = Lts(g.num_states, g.initial, frozenset(
        (s, {"%dia.a": "%dia.%sync.0.a", "%dia.b": "%dia.%sync.1.b"}.get(a, a), t)
        for s, a, t in g.transitions))
    assert isomorphic(q, renamed)


def test_index_out_of_range(trio):
    with pytest.raises(IndexError):
        build_quotient_network(graph_of(AB_FORMULA), trio, 4)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 100_000))
def test_encode_is_valid_and_faithful(seed):
    rng = random.Random(seed)
    f = prepare(random_formula(rng), LABELS)
    g = encode(f)
    assert check_formula_graph(g) == []
    for _ in range(4):
        m = random_lts(rng, rng.randint(1, 4))
        assert satisfying_states(m, decode(g)) == satisfying_states(m, f)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 100_000), st.data())
def test_quotient_encodes_the_quotient(seed, data):
    rng = random.Random(seed)
    n = random_network(rng)
    f = random_formula(rng)
    g = encode(prepare(f, alphabet(n)))
    i = data.draw(st.integers(1, n.size))
    q, sub = quotient(g, n, i)
    assert check_formula_graph(q) == []
    assert q.num_states <= g.num_states * n.components[i - 1].num_states
    assert check_global(sub, decode(q)) == check_global(n, f)
