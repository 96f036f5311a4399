"""Formula graphs: disjunctive formulas compiled into LTSs.

Reserved labels: ``%or``, ``%not``, ``%dia.<label>``, ``%mu.<k>`` and
``%mu@.<k>`` (a binder of a marked block). A deadlock state stands for ff.
Quotienting a formula graph against a component is the synchronous product
of a two-component network, see :func:`build_quotient_network`.
"""

from collections import deque

from ._graph import is_cyclic, strongly_connected_components
from .lts import Lts
from .mucalc import FF, Dia, Mu, Not, Or, Var, is_disjunctive
from .network import (INACTIVE, Network, SyncRule, alpha_label, empty_network,
                      extract_subnetwork, product)

OR = "%or"
NOT = "%not"
DIA_PREFIX = "%dia."


def dia(label):
    return DIA_PREFIX + label


def mu(block, marked=False):
    return f"%mu@.{block}" if marked else f"%mu.{block}"


def parse_label(label):
    """Split a reserved label into ``(kind, payload)``.

    kind is one of ``or``, ``not``, ``dia``, ``mu``; the payload is the
    modality label for ``dia`` and ``(block, marked)`` for ``mu``. Anything
    else raises ValueError.
    """
    if label == OR:
        return "or", None
    if label == NOT:
        return "not", None
    if label.startswith(DIA_PREFIX) and len(label) > len(DIA_PREFIX):
        return "dia", label[len(DIA_PREFIX):]
    for prefix, marked in (("%mu.", False), ("%mu@.", True)):
        if label.startswith(prefix):
            rest = label[len(prefix):]
            if rest.isdigit():
                return "mu", (int(rest), marked)
    raise ValueError(f"not a formula-graph label: {label!r}")


def is_mu(label):
    return label.startswith("%mu.") or label.startswith("%mu@.")


def is_marked_mu(label):
    return label.startswith("%mu@.")


def mu_block(label):
    return int(label.rsplit(".", 1)[1])


def encode(f):
    """Formula graph of a closed, disjunctive, block-labelled formula.

    States are numbered in depth-first preorder, left operand first;
    structurally identical subformulas share one state.
    """
    if not is_disjunctive(f):
        raise ValueError("encode expects a disjunctive formula")
    binders = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Mu):
            if g.block is None:
                raise ValueError("encode expects a block-labelled formula")
            binders[g.name] = g
        if isinstance(g, Var) and g.block is None:
            raise ValueError("encode expects a block-labelled formula")
        for attr in ("arg", "left", "right", "body"):
            child = getattr(g, attr, None)
            if child is not None:
                stack.append(child)

    ids = {}
    trans = set()

    def visit(g):
        if g in ids:
            return ids[g]
        me = ids[g] = len(ids)
        if isinstance(g, Var):
            if g.name not in binders:
                raise ValueError(f"free variable {g.name}")
            trans.add((me, OR, visit(binders[g.name])))
        elif isinstance(g, Not):
            trans.add((me, NOT, visit(g.arg)))
        elif isinstance(g, Dia):
            trans.add((me, dia(g.action), visit(g.arg)))
        elif isinstance(g, Or):
            trans.add((me, OR, visit(g.left)))
            trans.add((me, OR, visit(g.right)))
        elif isinstance(g, Mu):
            trans.add((me, mu(g.block, g.marked), visit(g.body)))
        elif not isinstance(g, FF):
            raise ValueError(f"unexpected node {g!r}")
        return me

    visit(f)
    return Lts(len(ids), 0, frozenset(trans))


def decode(g):
    """The formula a graph encodes, by literal unfolding from the root.

    A mu-transition whose source was already unfolded on the current path
    becomes a variable named after that source. Exponential in the worst
    case; meant for tests and debugging.
    """
    if check_formula_graph(g, conditions=(1,)):
        raise ValueError("decode expects a formula graph")

    def dec_s(s, seen):
        parts = [dec_t(s, a, t, seen) for a, t in g.out(s)]
        if not parts:
            return FF()
        out = parts[0]
        for p in parts[1:]:
            out = Or(out, p)
        return out

    def dec_t(s, a, t, seen):
        kind, payload = parse_label(a)
        if kind == "or":
            return dec_s(t, seen)
        if kind == "not":
            return Not(dec_s(t, seen))
        if kind == "dia":
            return Dia(payload, dec_s(t, seen))
        block, marked = payload
        name = f"X{s}"
        if s in seen:
            return Var(name, block, marked)
        return Mu(name, dec_s(t, seen | {s}), block, marked)

    return dec_s(g.initial, frozenset())


def check_formula_graph(g, conditions=(1, 2, 3)):
    """Violations of the formula-graph conditions, as readable strings.

    1. only reserved labels occur;
    2. a ``%mu.k`` (or ``%mu@.k``) transition is reached through a number
       of ``%not`` transitions with the parity of k;
    3. every circuit has a mu-transition, and the first one met when
       entering a strongly connected component has the smallest block of
       the component.
    """
    problems = []
    if 1 in conditions:
        for s, a, t in sorted(g.transitions):
            try:
                parse_label(a)
            except ValueError:
                problems.append(f"(1) transition ({s}, {a!r}, {t}) has a non-reserved label")
        if problems:
            return problems
    reach = g.reachable_states()
    if 2 in conditions:
        seen = {(g.initial, 0)}
        queue = deque(seen)
        while queue:
            s, p = queue.popleft()
            for a, t in g.out(s):
                if is_mu(a) and mu_block(a) % 2 != p:
                    problems.append(f"(2) {a} from state {s} reached through {'odd' if p else 'even'} negations")
                q = p ^ (a == NOT)
                if (t, q) not in seen:
                    seen.add((t, q))
                    queue.append((t, q))
    if 3 in conditions:
        def no_mu(s):
            return [t for a, t in g.out(s) if not is_mu(a)]

        for comp in strongly_connected_components(reach, no_mu):
            if is_cyclic(comp, no_mu):
                problems.append(f"(3a) circuit without mu-transition through states {sorted(comp)}")
        sccs = list(strongly_connected_components(reach, g.successors))
        comp_of = {s: i for i, c in enumerate(sccs) for s in c}
        for idx, comp in enumerate(sccs):
            if not is_cyclic(comp, g.successors):
                continue
            members = set(comp)
            blocks = [mu_block(a) for s in comp for a, t in g.out(s) if is_mu(a) and t in members]
            if not blocks:
                continue
            low = min(blocks)
            entries = {t for s in reach for a, t in g.out(s) if t in members and comp_of[s] != idx}
            if g.initial in members:
                entries.add(g.initial)
            for e in sorted(entries):
                first = _first_mu_blocks(g, e, members)
                bad = [k for k in first if k > low]
                if bad:
                    problems.append(f"(3b) entering at state {e} meets block {bad[0]} before block {low}")
    return problems


def _first_mu_blocks(g, entry, members):
    seen = {entry}
    stack = [entry]
    found = set()
    while stack:
        s = stack.pop()
        for a, t in g.out(s):
            if t not in members:
                continue
            if is_mu(a):
                found.add(mu_block(a))
            elif t not in seen:
                seen.add(t)
                stack.append(t)
    return found


def graph_blocks(g):
    """``(block, marked)`` pairs of the mu-labels occurring in `g`."""
    out = set()
    for _, a, _ in g.transitions:
        if is_mu(a):
            out.add((mu_block(a), is_marked_mu(a)))
    return out


def modal_labels(g):
    return {a[len(DIA_PREFIX):] for _, a, _ in g.transitions if a.startswith(DIA_PREFIX)}


def build_quotient_network(g, n, i):
    """Two-component network whose product is the quotient of `g` by component `i`.

    Only modal labels that occur in `g` get rules; rules for other result
    labels could never fire.
    """
    if not 1 <= i <= n.size:
        raise IndexError(f"component index {i} out of range 1..{n.size}")
    k = i - 1
    rules = [SyncRule((NOT, INACTIVE), NOT), SyncRule((OR, INACTIVE), OR)]
    for block, marked in sorted(graph_blocks(g)):
        lab = mu(block, marked)
        rules.append(SyncRule((lab, INACTIVE), lab))
    present = modal_labels(g)
    seen = set()
    for idx, r in enumerate(n.rules):
        if r.result not in present:
            continue
        own = r.vector[k]
        if own is INACTIVE:
            rule = SyncRule((dia(r.result), INACTIVE), dia(r.result))
        elif len(r.active) > 1:
            rule = SyncRule((dia(r.result), own), dia(alpha_label(n, idx)))
        else:
            rule = SyncRule((dia(r.result), own), OR)
        if rule not in seen:
            seen.add(rule)
            rules.append(rule)
    return Network((g, n.components[k]), tuple(rules), ("formula", n.names[k]))


def quotient(g, n, i, max_states=None):
    """Quotient graph and the network it must now be checked against."""
    q = product(build_quotient_network(g, n, i), max_states=max_states)
    sub = extract_subnetwork(n, i)[0] if n.size >= 2 else empty_network()
    return q, sub
