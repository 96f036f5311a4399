"""Networks of LTSs composed by synchronisation rules.

A rule pairs a vector over component labels with a result label. ``None``
(exported as :data:`INACTIVE`) marks a component that does not move when the
rule fires. Component indices are 1-based at the API boundary, matching the
file format and the command line.
"""

import itertools
import os
import re
from collections import deque
from dataclasses import dataclass, field

from .lts import Lts

INACTIVE = None


class NetFormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StateSpaceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class SyncRule:
    vector: tuple
    result: str

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(self.vector))
        if all(e is INACTIVE for e in self.vector):
            raise ValueError("a rule needs at least one active component")

    @property
    def active(self):
        """0-based indices of the components taking part in the rule."""
        return tuple(i for i, e in enumerate(self.vector) if e is not INACTIVE)

    def __str__(self):
        items = ", ".join("•" if e is INACTIVE else e for e in self.vector)
        return f"(({items}), {self.result})"


@dataclass(frozen=True)
class Network:
    components: tuple
    rules: tuple
    names: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"P{i + 1}" for i in range(len(self.components))))
        else:
            object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != len(self.components):
            raise ValueError("one name per component")
        for r in self.rules:
            if len(r.vector) != len(self.components):
                raise ValueError(f"rule {r} has arity {len(r.vector)}, network has {len(self.components)} components")

    @property
    def size(self):
        return len(self.components)


def alphabet(n):
    return frozenset(r.result for r in n.rules)


def product(n, max_states=None):
    """Reachable part of the global LTS, states numbered breadth-first.

    Raises :class:`StateSpaceTooLarge` once more than `max_states` tuples
    have been discovered.
    """
    comps = n.components
    init = tuple(c.initial for c in comps)
    number = {init: 0}
    queue = deque([init])
    trans = set()
    rules = [(r.active, r.vector, r.result) for r in n.rules]
    while queue:
        state = queue.popleft()
        src = number[state]
        for active, vector, result in rules:
            moves = [comps[i].succ(state[i], vector[i]) for i in active]
            if not all(moves):
                continue
            for targets in itertools.product(*moves):
                nxt = list(state)
                for i, t in zip(active, targets):
                    nxt[i] = t
                nxt = tuple(nxt)
                if nxt not in number:
                    number[nxt] = len(number)
                    if max_states is not None and len(number) > max_states:
                        raise StateSpaceTooLarge(f"product exceeds {max_states} states")
                    queue.append(nxt)
                trans.add((src, result, number[nxt]))
    return Lts(len(number), 0, frozenset(trans))


def alpha_label(n, rule_index):
    """Fresh interaction label for a shared rule.

    ``%sync.<index>.<result>``; primes are appended in the rare case where an
    earlier extraction already put that exact string into the network.
    """
    rule = n.rules[rule_index]
    used = set(alphabet(n))
    for c in n.components:
        used |= c.labels
    label = f"%sync.{rule_index}.{rule.result}"
    while label in used:
        label += "'"
    return label


def _check_index(n, i):
    if not 1 <= i <= n.size:
        raise IndexError(f"component index {i} out of range 1..{n.size}")


def extract_subnetwork(n, i):
    """Environment of component `i` (1-based) and the recomposition rules."""
    if n.size < 2:
        raise ValueError("sub-network extraction needs at least two components")
    _check_index(n, i)
    k = i - 1
    sub_rules = []
    interface = []
    for idx, r in enumerate(n.rules):
        rest = r.vector[:k] + r.vector[k + 1:]
        own = r.vector[k]
        if own is INACTIVE:
            sub_rules.append(SyncRule(rest, r.result))
            interface.append(SyncRule((INACTIVE, r.result), r.result))
        elif len(r.active) > 1:
            alpha = alpha_label(n, idx)
            sub_rules.append(SyncRule(rest, alpha))
            interface.append(SyncRule((own, alpha), r.result))
        else:
            interface.append(SyncRule((own, INACTIVE), r.result))
    sub = Network(n.components[:k] + n.components[k + 1:], sub_rules, n.names[:k] + n.names[k + 1:])
    return sub, tuple(interface)


def empty_network():
    return Network((), (), ())


# .net files

_TOKEN = re.compile(r'\s*(?:(?P<str>"(?:[^"\\]|\\.)*")|(?P<arrow>->)|(?P<punct>[(),-]))')


def _tokens(text, lineno):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise NetFormatError(f"unexpected input {text[pos:].strip()!r}", lineno)
        if m.group("str"):
            out.append(("str", re.sub(r"\\(.)", r"\1", m.group("str")[1:-1])))
        elif m.group("arrow"):
            out.append(("->", None))
        else:
            out.append((m.group("punct"), None))
        pos = m.end()
    return out


def _strip_comment(line):
    in_str = False
    escaped = False
    for idx, ch in enumerate(line):
        if escaped:
            escaped = False
        elif ch == "\\":
            escaped = True
        elif ch == '"':
            in_str = not in_str
        elif ch == "#" and not in_str:
            return line[:idx]
    return line


def _parse_rule(line, lineno, arity):
    toks = _tokens(line, lineno)
    if not toks or toks[0][0] != "(":
        raise NetFormatError("rule must start with '('", lineno)
    vector = []
    pos = 1
    while True:
        if pos >= len(toks):
            raise NetFormatError("unterminated rule vector", lineno)
        kind, val = toks[pos]
        if kind == "str":
            if not val:
                raise NetFormatError("empty label", lineno)
            vector.append(val)
        elif kind == "-":
            vector.append(INACTIVE)
        else:
            raise NetFormatError("expected a quoted label or '-'", lineno)
        pos += 1
        if pos < len(toks) and toks[pos][0] == ",":
            pos += 1
            continue
        break
    if pos >= len(toks) or toks[pos][0] != ")":
        raise NetFormatError("expected ')'", lineno)
    pos += 1
    if pos + 2 != len(toks) or toks[pos][0] != "->" or toks[pos + 1][0] != "str":
        raise NetFormatError('expected -> "<result>"', lineno)
    result = toks[pos + 1][1]
    if not result:
        raise NetFormatError("empty result label", lineno)
    if len(vector) != arity:
        raise NetFormatError(f"rule has {len(vector)} entries, network has {arity} components", lineno)
    if all(e is INACTIVE for e in vector):
        raise NetFormatError("rule with every component inactive", lineno)
    return SyncRule(tuple(vector), result)


def parse_net(text, loader):
    """Parse a network description; `loader(path)` returns the Lts at `path`."""
    paths = None
    rules = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if paths is None:
            words = line.split()
            if words[0] != "lts" or len(words) < 2:
                raise NetFormatError("expected 'lts <file.aut> ...' header", lineno)
            paths = words[1:]
            continue
        rules.append(_parse_rule(line, lineno, len(paths)))
    if paths is None:
        raise NetFormatError("missing 'lts' header", 1)
    comps = []
    for p in paths:
        try:
            comps.append(loader(p))
        except (OSError, FileNotFoundError) as exc:
            raise NetFormatError(f"cannot load {p}: {exc}") from exc
    names = [os.path.splitext(os.path.basename(p))[0] for p in paths]
    return Network(tuple(comps), tuple(rules), tuple(names))


def format_rule(rule):
    items = ", ".join("-" if e is INACTIVE else _q(e) for e in rule.vector)
    return f"({items}) -> {_q(rule.result)}"


def _q(label):
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_net(n, paths):
    if len(paths) != n.size:
        raise ValueError("one path per component")
    lines = ["lts " + " ".join(paths)]
    lines.extend(format_rule(r) for r in n.rules)
    return "\n".join(lines) + "\n"


def load_net(path):
    """Read a .net file, resolving component paths relative to it."""
    from .lts import AutFormatError, parse_aut

    base = os.path.dirname(os.path.abspath(path))

    def loader(p):
        full = p if os.path.isabs(p) else os.path.join(base, p)
        with open(full, encoding="utf-8") as fh:
            text = fh.read()
        try:
            return parse_aut(text)
        except AutFormatError as exc:
            raise AutFormatError(f"{p}: {exc}") from exc

    with open(path, encoding="utf-8") as fh:
        return parse_net(fh.read(), loader)
