"""Model checking drivers.

:func:`check_partial` is the compositional checker: it quotients the formula
graph by one component at a time and simplifies after each step.
:func:`check_global` builds the whole product and evaluates the formula on
it directly; it shares no code with the formula-graph machinery and serves
as the oracle.
"""

import random
from collections import deque
from dataclasses import dataclass

from ._graph import is_cyclic, strongly_connected_components
from .fgraph import DIA_PREFIX, encode, modal_labels, quotient
from .lts import Lts
from .mucalc import (FF, TT, And, AlternationError, Atom, Box, Choice, Concat, Delta, Dia,
                     DiaReg, Mu, Not, Nu, Or, Star, Var, action_matches, is_alternation_free,
                     prepare)
from .network import alphabet, product
from .simplify import TT as TT_VERDICT, UNRESOLVED, graph_verdict, simplify_pipeline, size

DEFAULT_MAX_STATES = 10**6


# direct evaluation

def satisfying_states(lts, f):
    """States of `lts` satisfying the closed formula `f`, by set iteration."""
    everything = frozenset(range(lts.num_states))

    def ev(g, env):
        if isinstance(g, FF):
            return frozenset()
        if isinstance(g, TT):
            return everything
        if isinstance(g, Var):
            return env[g.name]
        if isinstance(g, Not):
            return everything - ev(g.arg, env)
        if isinstance(g, Or):
            return ev(g.left, env) | ev(g.right, env)
        if isinstance(g, And):
            return ev(g.left, env) & ev(g.right, env)
        if isinstance(g, Dia):
            target = ev(g.arg, env)
            return frozenset(s for s in everything
                             if any(action_matches(g.action, a) and t in target for a, t in lts.out(s)))
        if isinstance(g, Box):
            target = ev(g.arg, env)
            return frozenset(s for s in everything
                             if all(t in target for a, t in lts.out(s) if action_matches(g.action, a)))
        if isinstance(g, (Mu, Nu)):
            greatest = isinstance(g, Nu) or g.marked
            current = everything if greatest else frozenset()
            while True:
                nxt = ev(g.body, {**env, g.name: current})
                if nxt == current:
                    return current
                current = nxt
        if isinstance(g, DiaReg):
            return _regular_diamond(lts, _Nfa(g.regex), ev(g.arg, env))
        if isinstance(g, Delta):
            return _infinite_looping(lts, _Nfa(g.regex))
        raise TypeError(f"not a formula: {g!r}")

    return ev(f, {})


class _Nfa:
    """Thompson automaton of a regular formula over action formulas."""

    def __init__(self, regex):
        self.eps = []
        self.moves = []
        self.start, self.final = self._build(regex)
        self.closure = [self._eps_closure(q) for q in range(len(self.eps))]

    def _new(self):
        self.eps.append([])
        self.moves.append([])
        return len(self.eps) - 1

    def _build(self, r):
        if isinstance(r, Atom):
            a, b = self._new(), self._new()
            self.moves[a].append((r.action, b))
            return a, b
        if isinstance(r, Concat):
            a1, b1 = self._build(r.left)
            a2, b2 = self._build(r.right)
            self.eps[b1].append(a2)
            return a1, b2
        if isinstance(r, Choice):
            a, b = self._new(), self._new()
            for sub in (r.left, r.right):
                x, y = self._build(sub)
                self.eps[a].append(x)
                self.eps[y].append(b)
            return a, b
        if isinstance(r, Star):
            a, b = self._new(), self._new()
            x, y = self._build(r.arg)
            self.eps[a] += [x, b]
            self.eps[y] += [x, b]
            return a, b
        raise TypeError(f"not a regular formula: {r!r}")

    def _eps_closure(self, q):
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for r in self.eps[p]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    @property
    def nullable(self):
        return self.final in self.closure[self.start]

    def step(self, lts, s, q):
        """Product successors of ``(s, q)`` over one LTS transition."""
        out = set()
        for p in self.closure[q]:
            for action, r in self.moves[p]:
                for a, t in lts.out(s):
                    if action_matches(action, a):
                        out.add((t, r))
        return out


def _regular_diamond(lts, nfa, target):
    """States with an R-path into `target`."""
    nodes = {(s, nfa.start) for s in range(lts.num_states)}
    succ = {}
    queue = deque(nodes)
    while queue:
        v = queue.popleft()
        succ[v] = nfa.step(lts, *v)
        for w in succ[v]:
            if w not in nodes:
                nodes.add(w)
                queue.append(w)
    preds = {v: [] for v in nodes}
    for v, ws in succ.items():
        for w in ws:
            preds[w].append(v)
    good = {v for v in nodes if v[0] in target and nfa.final in nfa.closure[v[1]]}
    queue = deque(good)
    while queue:
        w = queue.popleft()
        for v in preds[w]:
            if v not in good:
                good.add(v)
                queue.append(v)
    return frozenset(s for s, q in good if q == nfa.start)


def _infinite_looping(lts, nfa):
    """States starting an infinite chain of nonempty R-paths.

    Build the relation s => s' (some nonempty path from s to s' spells a word
    of R); a state qualifies when it reaches a cycle of that relation.
    """
    if nfa.nullable:
        return frozenset(range(lts.num_states))
    jumps = []
    for s in range(lts.num_states):
        seen = {(s, nfa.start)}
        queue = deque(seen)
        ends = set()
        while queue:
            v = queue.popleft()
            for w in nfa.step(lts, *v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
                if nfa.final in nfa.closure[w[1]]:
                    ends.add(w[0])
        jumps.append(sorted(ends))
    succ = jumps.__getitem__
    on_cycle = set()
    for comp in strongly_connected_components(range(lts.num_states), succ):
        if is_cyclic(comp, succ):
            on_cycle.update(comp)
    preds = [[] for _ in range(lts.num_states)]
    for s, ends in enumerate(jumps):
        for t in ends:
            preds[t].append(s)
    good = set(on_cycle)
    queue = deque(good)
    while queue:
        t = queue.popleft()
        for s in preds[t]:
            if s not in good:
                good.add(s)
                queue.append(s)
    return frozenset(good)


def check_global(n, f, max_states=DEFAULT_MAX_STATES):
    """Truth of `f` at the initial state of the product of `n`."""
    lts = product(n, max_states=max_states)
    return lts.initial in satisfying_states(lts, f)


# compositional checking

@dataclass(frozen=True)
class Step:
    component: str
    quotient: tuple
    simplified: tuple


@dataclass(frozen=True)
class Verdict:
    value: bool
    steps: tuple = ()
    stopped_early: bool = False
    remaining: tuple = ()
    initial: tuple = (0, 0)

    def __bool__(self):
        return self.value

    def __str__(self):
        return "TRUE" if self.value else "FALSE"


POLICIES = ("smart", "fixed", "last", "random")


def select_next(n, g, policy="smart", rng=None):
    """1-based index of the component to quotient next.

    ``smart`` prefers the component taking part in most rules that can still
    fire for the formula (their result occurs as a modality of `g`), then the
    one with most rules of its own, then the smaller LTS, then the lower
    index. This is a stand-in heuristic; any order gives the same verdict.
    """
    if n.size == 0:
        raise ValueError("empty network")
    if policy == "fixed":
        return 1
    if policy == "last":
        return n.size
    if policy == "random":
        return (rng or random.Random(0)).randint(1, n.size)
    if policy != "smart":
        raise ValueError(f"unknown policy {policy!r}")
    live = modal_labels(g)

    def key(k):
        relevant = sum(1 for r in n.rules if r.vector[k] is not None and r.result in live)
        own = sum(1 for r in n.rules if r.active == (k,))
        return (-relevant, -own, n.components[k].num_states, k)

    return min(range(n.size), key=key) + 1


def formula_graph(f, alph):
    """Front end: the simplified-free formula graph of `f` over `alph`."""
    normal = prepare(f, alph)
    if not is_alternation_free(normal):
        raise AlternationError("formula is not alternation-free after normalisation")
    return encode(normal)


def check_partial(n, f, policy="smart", seed=0, max_states=None, on_step=None):
    """Verdict of `f` on `n` by repeated quotienting and simplification.

    `on_step`, when given, is called with each :class:`Step` and the
    simplification report of that step.
    """
    rng = random.Random(seed)
    g = formula_graph(f, alphabet(n))
    initial = size(g)
    g, _ = simplify_pipeline(g)
    steps = []
    while True:
        verdict = graph_verdict(g)
        if verdict != UNRESOLVED:
            return Verdict(verdict == TT_VERDICT, tuple(steps), n.size > 0, n.names, initial)
        if n.size == 0:
            # no rule is left to fire a modality: every diamond is false
            bare = Lts(g.num_states, g.initial,
                       frozenset(t for t in g.transitions if not t[1].startswith(DIA_PREFIX)))
            g, _ = simplify_pipeline(bare)
            verdict = graph_verdict(g)
            if verdict == UNRESOLVED:
                raise AssertionError("modality-free graph did not reduce to a constant")
            return Verdict(verdict == TT_VERDICT, tuple(steps), False, (), initial)
        i = select_next(n, g, policy, rng)
        name = n.names[i - 1]
        q, sub = quotient(g, n, i, max_states=max_states)
        g, report = simplify_pipeline(q)
        step = Step(name, size(q), size(g))
        steps.append(step)
        if on_step is not None:
            on_step(step, report)
        n = sub
