"""Seeded random instances for property tests and the acceptance suite.

Distribution: labels from a three-letter alphabet; LTSs with every state
reachable and at most 2n transitions; networks of one to three components
with at most five states and six rules, 30% of the rules binary
synchronisations, each rule label drawn from those the component uses;
formulas of depth two to five weighted toward modalities, with constants
only at the leaves.
Every generator takes a :class:`random.Random` so runs are reproducible.
"""

from .bes import MU, NU, Bes, Block, Rhs, Variable
from .lts import Lts
from .mucalc import (ANY, FF, TT, And, Atom, Box, Choice, Concat, Delta, Dia, Mu, Not,
                     NotSet, Nu, Or, Star, Var, is_alternation_free, prepare)
from .network import INACTIVE, Network, SyncRule

LABELS = ("a", "b", "c")


def random_lts(rng, n_states, labels=LABELS, max_trans=None):
    """Every state reachable: a random spanning tree from 0 plus extra edges."""
    n_states = max(1, n_states)
    labels = list(labels)
    if max_trans is None:
        max_trans = 2 * n_states
    trans = {(rng.randrange(s), rng.choice(labels), s) for s in range(1, n_states)}
    for _ in range(rng.randint(0, max(0, max_trans - len(trans)))):
        trans.add((rng.randrange(n_states), rng.choice(labels), rng.randrange(n_states)))
    return Lts(n_states, 0, frozenset(trans))


def random_network(rng, max_components=3, max_states=5, max_rules=6, labels=LABELS, sync_rate=0.3):
    k = rng.randint(1, max_components)
    comps = [random_lts(rng, rng.randint(1, max_states), labels) for _ in range(k)]
    used = [sorted({a for _, a, _ in c.transitions}) or list(labels) for c in comps]
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        vector = [INACTIVE] * k
        if k >= 2 and rng.random() < sync_rate:
            for i in rng.sample(range(k), 2):
                vector[i] = rng.choice(used[i])
        else:
            i = rng.randrange(k)
            vector[i] = rng.choice(used[i])
        rule = SyncRule(tuple(vector), rng.choice(labels))
        if rule not in rules:
            rules.append(rule)
    return Network(tuple(comps), tuple(rules))


def _action(rng, labels):
    x = rng.random()
    if x < 0.15:
        return ANY
    if x < 0.25:
        return NotSet({rng.choice(labels)})
    return rng.choice(labels)


def _formula(rng, depth, labels, env, negs, counter):
    usable = [name for name, at in env if (negs - at) % 2 == 0]
    if depth <= 0:
        choices = ["tt", "ff"] + ["var"] * (2 * bool(usable))
        kind = rng.choice(choices)
    else:
        kind = rng.choices(
            ["dia", "box", "or", "and", "not", "mu", "nu", "var", "tt", "ff"],
            weights=[5, 4, 2, 2, 1, 2, 2, 3 if usable else 0, 0, 0])[0]
    if kind == "tt":
        return TT()
    if kind == "ff":
        return FF()
    if kind == "var":
        return Var(rng.choice(usable))
    d = depth - 1
    if kind in ("dia", "box"):
        ctor = Dia if kind == "dia" else Box
        return ctor(_action(rng, labels), _formula(rng, d, labels, env, negs, counter))
    if kind in ("or", "and"):
        ctor = Or if kind == "or" else And
        return ctor(_formula(rng, d, labels, env, negs, counter), _formula(rng, d, labels, env, negs, counter))
    if kind == "not":
        return Not(_formula(rng, d, labels, env, negs + 1, counter))
    counter[0] += 1
    name = f"X{counter[0]}"
    body = _formula(rng, d, labels, env + [(name, negs)], negs, counter)
    return (Mu if kind == "mu" else Nu)(name, body)


def random_formula(rng, depth=5, labels=LABELS, alternation_free=True, tries=200):
    """Closed, monotone formula of depth at most `depth`.

    With `alternation_free` set, candidates are filtered through the
    normaliser until one is alternation-free.
    """
    for _ in range(tries):
        f = _formula(rng, rng.randint(min(2, depth), depth), labels, [], 0, [0])
        if not alternation_free or is_alternation_free(prepare(f, labels)):
            return f
    raise RuntimeError("no alternation-free formula found")


def random_regex(rng, labels=LABELS, star=False):
    """Star-free regular formula, or one with exactly one star."""
    def leaf():
        return Atom(_action(rng, labels))

    def tree(depth):
        if depth == 0 or rng.random() < 0.4:
            return leaf()
        ctor = rng.choice([Concat, Choice])
        return ctor(tree(depth - 1), tree(depth - 1))

    r = tree(2)
    if not star:
        return r
    starred = Star(tree(1))
    shape = rng.randrange(4)
    if shape == 0:
        return Concat(starred, r)
    if shape == 1:
        return Concat(r, starred)
    if shape == 2:
        return Concat(Concat(r, starred), leaf())
    return Choice(Concat(starred, r), r)


def random_delta_formula(rng, labels=LABELS):
    """A single infinite-looping operator inside a small context."""
    delta = Delta(random_regex(rng, labels, star=rng.random() < 0.5))
    a, b = rng.choice(labels), rng.choice(labels)
    contexts = [
        lambda d: d,
        lambda d: Not(d),
        lambda d: Dia(a, d),
        lambda d: Box(a, d),
        lambda d: Or(d, Dia(b, TT())),
        lambda d: And(d, Box(b, FF())),
        lambda d: Mu("Z", Or(d, Dia(b, Var("Z")))),
        lambda d: Nu("Z", And(Not(d), Box(b, Var("Z")))),
    ]
    return rng.choice(contexts)(delta)


def random_bes(rng, n_vars=12, n_blocks=2):
    """Alternation-free system: a block only refers to itself and later blocks."""
    blocks = [rng.choice([MU, NU]) for _ in range(n_blocks)]
    where = sorted(rng.randrange(n_blocks) for _ in range(n_vars))
    variables = [Variable(b, f"x{i}") for i, b in enumerate(where)]
    eqs = [dict() for _ in range(n_blocks)]
    for v in variables:
        pool = [w for w in variables if w.block >= v.block]
        args = tuple(rng.choice(pool) for _ in range(rng.randint(0, 3)))
        eqs[v.block][v] = Rhs(rng.choice(["or", "and"]), args)
    return Bes([Block(sign, eqs[i]) for i, sign in enumerate(blocks)])


def random_marked_bes(rng, n_vars=8):
    """One disjunctive marked least-fixpoint block plus a block of constants."""
    true, false = Variable(1, "true"), Variable(1, "false")
    variables = [Variable(0, f"x{i}", marked=rng.random() < 0.3) for i in range(n_vars)]
    eqs = {}
    for v in variables:
        args = set()
        for _ in range(rng.randint(0, 2)):
            args.add(rng.choice(variables))
        if rng.random() < 0.1:
            args.add(rng.choice([true, false]))
        eqs[v] = Rhs("or", tuple(sorted(args)))
    return Bes([Block(MU, eqs), Block(MU, {true: Rhs("and"), false: Rhs("or")})])
