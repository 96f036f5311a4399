"""Finite labelled transition systems.

An :class:`Lts` is an immutable value: dense states ``0..num_states-1``, one
initial state and a set of ``(source, label, target)`` triples. The module
also reads and writes the Aldebaran text format and implements the two
reductions the checker relies on, strong bisimulation and tau*.a.
"""

import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property

from ._graph import strongly_connected_components


class AutFormatError(ValueError):
    """Malformed Aldebaran input. Carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Lts:
    num_states: int
    initial: int
    transitions: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.transitions, frozenset):
            object.__setattr__(self, "transitions", frozenset(self.transitions))
        if self.num_states < 1:
            raise ValueError("an LTS needs at least one state")
        if not 0 <= self.initial < self.num_states:
            raise ValueError(f"initial state {self.initial} out of range")
        for s, a, t in self.transitions:
            if not (0 <= s < self.num_states and 0 <= t < self.num_states):
                raise ValueError(f"transition {(s, a, t)} leaves the state range")
            if not isinstance(a, str) or not a:
                raise ValueError(f"bad label {a!r}")

    @cached_property
    def labels(self):
        return frozenset(a for _, a, _ in self.transitions)

    @cached_property
    def _out(self):
        out = [[] for _ in range(self.num_states)]
        for s, a, t in sorted(self.transitions):
            out[s].append((a, t))
        return tuple(tuple(x) for x in out)

    @cached_property
    def _by_label(self):
        idx = defaultdict(list)
        for s, a, t in sorted(self.transitions):
            idx[s, a].append(t)
        return {k: tuple(v) for k, v in idx.items()}

    def out(self, s):
        """Outgoing ``(label, target)`` pairs of `s`, sorted."""
        return self._out[s]

    def succ(self, s, label):
        return self._by_label.get((s, label), ())

    def successors(self, s):
        return [t for _, t in self._out[s]]

    def reachable_states(self):
        seen = {self.initial}
        order = [self.initial]
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for _, t in self._out[s]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def restrict_reachable(self):
        """Reachable part, renumbered in breadth-first discovery order."""
        order = self.reachable_states()
        new = {s: i for i, s in enumerate(order)}
        trans = {(new[s], a, new[t]) for s, a, t in self.transitions if s in new}
        return Lts(len(order), 0, frozenset(trans))

    def __repr__(self):
        return f"Lts({self.num_states} states, init {self.initial}, {len(self.transitions)} transitions)"


# Aldebaran I/O

_HEADER = re.compile(r"^\s*des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_TRANS = re.compile(
    r'^\s*\(\s*(\d+)\s*,\s*(?:"((?:[^"\\]|\\.)*)"|([^,"()\s][^,"()]*?))\s*,\s*(\d+)\s*\)\s*$'
)
_UNESCAPE = re.compile(r"\\(.)")


def _quote(label):
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def parse_aut(text):
    lines = text.split("\n")
    header = None
    body = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise AutFormatError("expected 'des (<init>, <ntrans>, <nstates>)'", lineno)
            header = tuple(int(g) for g in m.groups())
            continue
        m = _TRANS.match(line)
        if not m:
            raise AutFormatError(f"cannot parse transition {line.strip()!r}", lineno)
        src, quoted, bare, tgt = m.groups()
        label = _UNESCAPE.sub(r"\1", quoted) if quoted is not None else bare.strip()
        if not label:
            raise AutFormatError("empty label", lineno)
        body.append((lineno, int(src), label, int(tgt)))
    if header is None:
        raise AutFormatError("empty file", 1)
    init, ntrans, nstates = header
    if nstates < 1:
        raise AutFormatError("state count must be positive", 1)
    if init >= nstates:
        raise AutFormatError(f"initial state {init} out of range", 1)
    if len(body) != ntrans:
        raise AutFormatError(f"header declares {ntrans} transitions, body has {len(body)}")
    trans = set()
    for lineno, s, a, t in body:
        if s >= nstates or t >= nstates:
            raise AutFormatError(f"state index out of range in ({s}, {a!r}, {t})", lineno)
        trans.add((s, a, t))
    return Lts(nstates, init, frozenset(trans))


def write_aut(lts):
    trans = sorted(lts.transitions)
    lines = [f"des ({lts.initial}, {len(trans)}, {lts.num_states})"]
    lines.extend(f"({s}, {_quote(a)}, {t})" for s, a, t in trans)
    return "\n".join(lines) + "\n"


# strong bisimulation

def _coarsest_partition(num_states, transitions):
    """Block id per state for the coarsest strong bisimulation.

    Splitter-queue refinement: every block created by a split is queued as a
    future splitter, so the final partition is stable for all of its blocks.
    """
    pred = defaultdict(list)
    for s, a, t in transitions:
        pred[t].append((a, s))
    block_of = [0] * num_states
    blocks = {0: set(range(num_states))}
    fresh = 1
    queue = deque([0])
    queued = {0}
    while queue:
        b = queue.popleft()
        queued.discard(b)
        if b not in blocks:
            continue
        by_label = defaultdict(set)
        for t in blocks[b]:
            for a, s in pred[t]:
                by_label[a].add(s)
        for a in sorted(by_label):
            hit = defaultdict(set)
            for s in by_label[a]:
                hit[block_of[s]].add(s)
            for c in sorted(hit):
                part = hit[c]
                if len(part) == len(blocks[c]):
                    continue
                blocks[c] -= part
                blocks[fresh] = part
                for s in part:
                    block_of[s] = fresh
                for x in (c, fresh):
                    if x not in queued:
                        queued.add(x)
                        queue.append(x)
                fresh += 1
    return block_of


def _quotient(lts, block_of):
    """Quotient by a partition, reachable part, breadth-first numbering."""
    members = defaultdict(list)
    for s in range(lts.num_states):
        members[block_of[s]].append(s)
    rep = {b: min(ms) for b, ms in members.items()}
    edges = defaultdict(set)
    for s, a, t in lts.transitions:
        edges[block_of[s]].add((a, block_of[t]))
    start = block_of[lts.initial]
    number = {start: 0}
    queue = deque([start])
    trans = set()
    while queue:
        b = queue.popleft()
        for a, c in sorted(edges[b], key=lambda e: (e[0], rep[e[1]])):
            if c not in number:
                number[c] = len(number)
                queue.append(c)
            trans.add((number[b], a, number[c]))
    return Lts(len(number), 0, frozenset(trans))


def strong_bisim_reduce(lts):
    """Minimal strongly bisimilar LTS, reachable part only.

    States are numbered in breadth-first order from the initial state,
    visiting edges by label and then by the smallest original member of the
    target class, so equal inputs always give byte-identical outputs.
    """
    part = lts.restrict_reachable()
    return _quotient(part, _coarsest_partition(part.num_states, part.transitions))


def is_strongly_bisimilar(l1, l2):
    offset = l1.num_states
    trans = set(l1.transitions)
    trans.update((s + offset, a, t + offset) for s, a, t in l2.transitions)
    block_of = _coarsest_partition(offset + l2.num_states, trans)
    return block_of[l1.initial] == block_of[l2.initial + offset]


def tau_star_a_reduce(lts, internal):
    """Reduce modulo tau*.a equivalence, labels in `internal` being tau.

    Every state receives the visible transitions of all states it reaches by
    internal moves, then internal moves are dropped. States on an internal
    cycle share their closure, so each such cycle ends up as one class. The
    result is strongly reduced.
    """
    internal = frozenset(internal)
    n = lts.num_states
    tau_succ = [[] for _ in range(n)]
    visible = [set() for _ in range(n)]
    for s, a, t in lts.transitions:
        if a in internal:
            tau_succ[s].append(t)
        else:
            visible[s].add((a, t))

    comp_of = {}
    closure = {}
    for idx, comp in enumerate(strongly_connected_components(range(n), lambda s: tau_succ[s])):
        members = set(comp)
        for s in comp:
            comp_of[s] = idx
        acc = set()
        for s in comp:
            acc |= visible[s]
            for t in tau_succ[s]:
                if t in members:
                    continue
                acc |= closure[comp_of[t]]
        closure[idx] = acc

    trans = set()
    for s in range(n):
        for a, t in closure[comp_of[s]]:
            trans.add((s, a, t))
    return strong_bisim_reduce(Lts(n, lts.initial, frozenset(trans)))
