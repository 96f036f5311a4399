import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmc.generators import random_network
from pmc.lts import is_strongly_bisimilar
from pmc.network import (INACTIVE, NetFormatError, Network, StateSpaceTooLarge, SyncRule,
                         alpha_label, alphabet, extract_subnetwork, parse_net, product, write_net)

from conftest import lts

_ = INACTIVE


def recompose(n, i):
    sub, interface = extract_subnetwork(n, i)
    return Network((n.components[i - 1], product(sub)), interface)


def test_interleaving_product():
    p = lts(2, (0, "a", 1))
    q = lts(2, (0, "b", 1))
    n = Network((p, q), (SyncRule(("a", _), "a"), SyncRule((_, "b"), "b")))
    g = product(n)
    assert g.num_states == 4
    assert len(g.transitions) == 4


def test_sync_product():
    p = lts(2, (0, "a", 1))
    q = lts(2, (0, "a", 1), (0, "b", 0))
    n = Network((p, q), (SyncRule(("a", "a"), "go"),))
    assert product(n) == lts(2, (0, "go", 1))


def test_product_cap():
    p = lts(3, (0, "a", 1), (1, "a", 2))
    n = Network((p, p), (SyncRule(("a", _), "a"), SyncRule((_, "a"), "a")))
    assert product(n, max_states=9).num_states == 9
    with pytest.raises(StateSpaceTooLarge):
        product(n, max_states=8)


def test_trio_subnetwork(trio):
    sub = extract_subnetwork(trio, 3)[0]
    assert [str(r) for r in sub.rules] == [
        "((a, a), a)", "((a, •), %sync.1.a)", "((b, b), %sync.2.b)", "((c, c), tau)"]
    assert sub.names == ("P1", "P2")


def test_trio_interface(trio):
    interface = extract_subnetwork(trio, 3)[1]
    assert [str(r) for r in interface] == [
        "((•, a), a)", "((a, %sync.1.a), a)", "((b, %sync.2.b), b)", "((•, tau), tau)", "((d, •), d)"]


def test_trio_recomposition(trio):
    assert is_strongly_bisimilar(product(trio), product(recompose(trio, 3)))


def test_alpha_label_avoids_collisions():
    p = lts(1, (0, "a", 0), (0, "%sync.0.a", 0))
    n = Network((p, p), (SyncRule(("a", "a"), "a"), SyncRule(("%sync.0.a", _), "x")))
    assert alpha_label(n, 0) == "%sync.0.a'"


def test_alpha_labels_fresh_after_two_extractions():
    p = lts(1, (0, "a", 0))
    n = Network((p, p, p), (SyncRule(("a", "a", "a"), "a"), SyncRule((_, "a", "a"), "a")))
    first = extract_subnetwork(n, 1)[0]
    second = extract_subnetwork(first, 1)[0]
    assert len({r.result for r in second.rules}) == 2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 100_000), st.data())
def test_recomposition_is_bisimilar(seed, data):
    n = random_network(random.Random(seed))
    if n.size < 2:
        return
    i = data.draw(st.integers(1, n.size))
    assert is_strongly_bisimilar(product(n), product(recompose(n, i)))


def test_extract_needs_two_components():
    with pytest.raises(ValueError):
        extract_subnetwork(Network((lts(1),), ()), 1)
    n = Network((lts(1), lts(1)), ())
    with pytest.raises(IndexError):
        extract_subnetwork(n, 3)


def test_rule_validation():
    with pytest.raises(ValueError):
        SyncRule((_, _), "a")
    with pytest.raises(ValueError):
        Network((lts(1),), (SyncRule(("a", "b"), "a"),))


def test_net_round_trip(trio):
    text = write_net(trio, ["P1.aut", "P2.aut", "P3.aut"])
    comps = dict(zip(["P1.aut", "P2.aut", "P3.aut"], trio.components))
    again = parse_net(text, comps.__getitem__)
    assert again.rules == trio.rules
    assert alphabet(again) == {"a", "b", "tau", "d"}


@pytest.mark.parametrize("text", [
    'lts A\n("a", "b") -> "c"\n',
    'lts A\n(-) -> "c"\n',
    'lts A\n("a") "c"\n',
    '("a") -> "c"\n',
    'lts A\n("a") -> ""\n',
])
def test_net_errors(text):
    with pytest.raises(NetFormatError):
        parse_net(text, lambda p: lts(1))


def test_net_comments_and_hash_in_labels():
    n = parse_net('# header\nlts A  # one component\n("x#y") -> "z"  # rule\n', lambda p: lts(1))
    assert n.rules == (SyncRule(("x#y",), "z"),)
    assert n.names == ("A",)
