"""Modal mu-calculus formulas.

The AST covers the full surface language (conjunction, box, greatest
fixpoints, regular diamonds and the infinite-looping operator ``<R>@``) and
the normal form the checker works on: the disjunctive form built from ff,
disjunction, diamond over a single label, least fixpoints, variables and
negation, with every variable carrying a block number.
"""

import random
import re
from dataclasses import dataclass
from functools import reduce


class FormulaSyntaxError(ValueError):
    pass


class MonotonicityError(ValueError):
    pass


class AlternationError(ValueError):
    pass


class Formula:
    __slots__ = ()

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class FF(Formula):
    pass


@dataclass(frozen=True)
class TT(Formula):
    pass


@dataclass(frozen=True)
class Var(Formula):
    name: str
    block: int = None
    marked: bool = False


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Dia(Formula):
    action: object
    arg: Formula


@dataclass(frozen=True)
class Box(Formula):
    action: object
    arg: Formula


@dataclass(frozen=True)
class Mu(Formula):
    name: str
    body: Formula
    block: int = None
    marked: bool = False


@dataclass(frozen=True)
class Nu(Formula):
    name: str
    body: Formula
    marked: bool = False


@dataclass(frozen=True)
class DiaReg(Formula):
    regex: object
    arg: Formula


@dataclass(frozen=True)
class Delta(Formula):
    regex: object


# action formulas: a plain str is a concrete label

@dataclass(frozen=True)
class AnyAction:
    def __str__(self):
        return "any"


ANY = AnyAction()


@dataclass(frozen=True)
class NotSet:
    labels: frozenset

    def __post_init__(self):
        object.__setattr__(self, "labels", frozenset(self.labels))
        if not self.labels:
            raise ValueError("not() needs at least one label")

    def __str__(self):
        return "not(" + ", ".join(_q(x) for x in sorted(self.labels)) + ")"


def action_matches(action, label):
    if isinstance(action, str):
        return action == label
    if isinstance(action, AnyAction):
        return True
    return label not in action.labels


def action_labels(action, alphabet):
    """Concrete labels an action formula denotes over `alphabet`, sorted."""
    if isinstance(action, str):
        return [action]
    return sorted(a for a in alphabet if action_matches(action, a))


# regular formulas

@dataclass(frozen=True)
class Atom:
    action: object


@dataclass(frozen=True)
class Concat:
    left: object
    right: object


@dataclass(frozen=True)
class Choice:
    left: object
    right: object


@dataclass(frozen=True)
class Star:
    arg: object


# printing

def _q(label):
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _show_action(a):
    return _q(a) if isinstance(a, str) else str(a)


def show_regex(r):
    if isinstance(r, Atom):
        return _show_action(r.action)
    if isinstance(r, Concat):
        return f"({show_regex(r.left)} . {show_regex(r.right)})"
    if isinstance(r, Choice):
        return f"({show_regex(r.left)} | {show_regex(r.right)})"
    return f"({show_regex(r.arg)})*"


def show(f):
    """Concrete syntax; re-parses to the same formula up to block numbers."""
    if isinstance(f, FF):
        return "false"
    if isinstance(f, TT):
        return "true"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return f"not {_atomic(f.arg)}"
    if isinstance(f, Or):
        return f"({show(f.left)} or {show(f.right)})"
    if isinstance(f, And):
        return f"({show(f.left)} and {show(f.right)})"
    if isinstance(f, Dia):
        return f"<{_show_action(f.action)}> {_atomic(f.arg)}"
    if isinstance(f, Box):
        return f"[{_show_action(f.action)}] {_atomic(f.arg)}"
    if isinstance(f, Mu):
        return f"(mu {f.name} . {show(f.body)})"
    if isinstance(f, Nu):
        return f"(nu {f.name} . {show(f.body)})"
    if isinstance(f, DiaReg):
        return f"<{show_regex(f.regex)}> {_atomic(f.arg)}"
    if isinstance(f, Delta):
        return f"<{show_regex(f.regex)}> @"
    raise TypeError(f"not a formula: {f!r}")


def _atomic(f):
    s = show(f)
    if isinstance(f, (Not, Dia, Box, DiaReg)):
        return f"({s})"
    return s


# parsing

_KEYWORDS = {"true", "false", "not", "or", "and", "mu", "nu", "any"}
_LEX = re.compile(
    r'\s*(?:(?P<str>"(?:[^"\\]|\\.)*")|(?P<id>[A-Za-z_][A-Za-z0-9_#\']*)|(?P<p>[<>\[\]().|*@,]))'
)


def _lex(text):
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _LEX.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        if m.group("str") is not None:
            toks.append(("str", re.sub(r"\\(.)", r"\1", m.group("str")[1:-1]), m.start("str")))
        elif m.group("id") is not None:
            word = m.group("id")
            toks.append(("kw" if word in _KEYWORDS else "id", word, m.start("id")))
        else:
            toks.append(("p", m.group("p"), m.start("p")))
        pos = m.end()
    toks.append(("eof", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _lex(text)
        self.pos = 0

    def peek(self, kind=None, value=None):
        k, v, _ = self.toks[self.pos]
        return (kind is None or k == kind) and (value is None or v == value)

    def take(self, kind=None, value=None):
        k, v, off = self.toks[self.pos]
        if (kind is not None and k != kind) or (value is not None and v != value):
            want = value or kind
            got = v if v is not None else "end of input"
            raise FormulaSyntaxError(f"expected {want!r} but found {got!r} at offset {off}")
        self.pos += 1
        return v

    def formula(self):
        left = self.conj()
        while self.peek("kw", "or"):
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek("kw", "and"):
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.peek("kw", "not"):
            self.take()
            return Not(self.unary())
        if self.peek("kw", "mu") or self.peek("kw", "nu"):
            ctor = Mu if self.take() == "mu" else Nu
            name = self.take("id")
            self.take("p", ".")
            return ctor(name, self.formula())
        if self.peek("p", "<"):
            self.take()
            r = self.regex()
            self.take("p", ">")
            if self.peek("p", "@"):
                self.take()
                return Delta(r)
            arg = self.unary()
            return Dia(r.action, arg) if isinstance(r, Atom) else DiaReg(r, arg)
        if self.peek("p", "["):
            self.take()
            r = self.regex()
            self.take("p", "]")
            if not isinstance(r, Atom):
                raise FormulaSyntaxError("box modalities take a single action formula")
            return Box(r.action, self.unary())
        return self.atom()

    def atom(self):
        if self.peek("kw", "true"):
            self.take()
            return TT()
        if self.peek("kw", "false"):
            self.take()
            return FF()
        if self.peek("id"):
            return Var(self.take())
        if self.peek("p", "("):
            self.take()
            f = self.formula()
            self.take("p", ")")
            return f
        k, v, off = self.toks[self.pos]
        raise FormulaSyntaxError(f"unexpected {v if v is not None else 'end of input'!r} at offset {off}")

    def regex(self):
        left = self.regex_seq()
        while self.peek("p", "|"):
            self.take()
            left = Choice(left, self.regex_seq())
        return left

    def regex_seq(self):
        left = self.regex_star()
        while self.peek("p", "."):
            self.take()
            left = Concat(left, self.regex_star())
        return left

    def regex_star(self):
        r = self.regex_atom()
        while self.peek("p", "*"):
            self.take()
            r = Star(r)
        return r

    def regex_atom(self):
        if self.peek("str"):
            return Atom(self.take())
        if self.peek("kw", "any") or self.peek("kw", "true"):
            self.take()
            return Atom(ANY)
        if self.peek("kw", "not"):
            self.take()
            self.take("p", "(")
            labels = [self.take("str")]
            while self.peek("p", ","):
                self.take()
                labels.append(self.take("str"))
            self.take("p", ")")
            return Atom(NotSet(frozenset(labels)))
        if self.peek("p", "("):
            self.take()
            r = self.regex()
            self.take("p", ")")
            return r
        k, v, off = self.toks[self.pos]
        raise FormulaSyntaxError(f"expected an action formula at offset {off}")


def parse_formula(text):
    p = _Parser(text)
    f = p.formula()
    p.take("eof")
    return rename_bound(f)


def _all_names(f, acc=None):
    acc = set() if acc is None else acc
    for g in _walk(f):
        if isinstance(g, (Var, Mu, Nu)):
            acc.add(g.name)
    return acc


def _walk(f):
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(_children(g))


def _children(f):
    if isinstance(f, (Not, Dia, Box, DiaReg)):
        return (f.arg,)
    if isinstance(f, (Or, And)):
        return (f.left, f.right)
    if isinstance(f, (Mu, Nu)):
        return (f.body,)
    return ()


class _Fresh:
    def __init__(self, taken):
        self.taken = set(taken)
        self.counter = 0

    def __call__(self, base):
        base = base.split("#")[0]
        while True:
            self.counter += 1
            name = f"{base}#{self.counter}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def rename_bound(f):
    """Alpha-convert so bound names are pairwise distinct, and check
    closedness and syntactic monotonicity."""
    fresh = _Fresh(_all_names(f))
    seen = set()

    def go(g, env, negs):
        if isinstance(g, Var):
            if g.name not in env:
                raise FormulaSyntaxError(f"free variable {g.name}")
            new, at = env[g.name]
            if (negs - at) % 2:
                raise MonotonicityError(f"variable {g.name} occurs under an odd number of negations")
            return Var(new, g.block, g.marked)
        if isinstance(g, (Mu, Nu)):
            new = g.name
            if new in seen:
                new = fresh(g.name)
            seen.add(new)
            body = go(g.body, {**env, g.name: (new, negs)}, negs)
            if isinstance(g, Mu):
                return Mu(new, body, g.block, g.marked)
            return Nu(new, body, g.marked)
        if isinstance(g, Not):
            return Not(go(g.arg, env, negs + 1))
        return _rebuild(g, lambda h: go(h, env, negs))

    return go(f, {}, 0)


def _rebuild(g, fn):
    if isinstance(g, (FF, TT, Var, Delta)):
        return g
    if isinstance(g, Not):
        return Not(fn(g.arg))
    if isinstance(g, Or):
        return Or(fn(g.left), fn(g.right))
    if isinstance(g, And):
        return And(fn(g.left), fn(g.right))
    if isinstance(g, Dia):
        return Dia(g.action, fn(g.arg))
    if isinstance(g, Box):
        return Box(g.action, fn(g.arg))
    if isinstance(g, DiaReg):
        return DiaReg(g.regex, fn(g.arg))
    if isinstance(g, Mu):
        return Mu(g.name, fn(g.body), g.block, g.marked)
    if isinstance(g, Nu):
        return Nu(g.name, fn(g.body), g.marked)
    raise TypeError(f"not a formula: {g!r}")


def _freshen(f, fresh):
    """Copy of `f` whose binders all get new names."""
    def go(g, env):
        if isinstance(g, Var):
            return Var(env.get(g.name, g.name), g.block, g.marked)
        if isinstance(g, (Mu, Nu)):
            new = fresh(g.name)
            body = go(g.body, {**env, g.name: new})
            if isinstance(g, Mu):
                return Mu(new, body, g.block, g.marked)
            return Nu(new, body, g.marked)
        return _rebuild(g, lambda h: go(h, env))

    return go(f, {})


def _has_binder(f):
    return any(isinstance(g, (Mu, Nu)) for g in _walk(f))


# regular modalities

def expand_regular(f):
    """Eliminate regular diamonds and ``<R>@`` using the PDL identities."""
    fresh = _Fresh(_all_names(f))
    return _expand(f, fresh)


def _expand(f, fresh):
    if isinstance(f, DiaReg):
        return _dia_reg(f.regex, _expand(f.arg, fresh), fresh)
    if isinstance(f, Delta):
        x = fresh("X")
        return Nu(x, _dia_reg(f.regex, Var(x, marked=True), fresh), marked=True)
    return _rebuild(f, lambda h: _expand(h, fresh))


def _dia_reg(r, phi, fresh):
    if isinstance(r, Atom):
        return Dia(r.action, phi)
    if isinstance(r, Concat):
        return _dia_reg(r.left, _dia_reg(r.right, phi, fresh), fresh)
    if isinstance(r, Choice):
        right = _freshen(phi, fresh) if _has_binder(phi) else phi
        return Or(_dia_reg(r.left, phi, fresh), _dia_reg(r.right, right, fresh))
    y = fresh("Y")
    return Mu(y, Or(phi, _dia_reg(r.arg, Var(y), fresh)))


def resolve_actions(f, alphabet):
    """Replace ``any`` and ``not(...)`` by the concrete labels of `alphabet`.

    Regular modalities are expanded on the way, so their atoms are handled
    by the same diamond rule.
    """
    if any(isinstance(g, (DiaReg, Delta)) for g in _walk(f)):
        f = expand_regular(f)
    fresh = _Fresh(_all_names(f))
    alphabet = frozenset(alphabet)

    def go(g):
        if isinstance(g, (Dia, Box)) and not isinstance(g.action, str):
            arg = go(g.arg)
            labels = action_labels(g.action, alphabet)
            if not labels:
                return FF() if isinstance(g, Dia) else TT()
            ctor, join = (Dia, Or) if isinstance(g, Dia) else (Box, And)
            parts = []
            for idx, a in enumerate(labels):
                body = arg if idx == 0 or not _has_binder(arg) else _freshen(arg, fresh)
                parts.append(ctor(a, body))
            return reduce(join, parts)
        return _rebuild(g, go)

    return go(f)


# disjunctive form

def to_disjunctive(f):
    """Rewrite into ff / or / <a> / mu / variables / not.

    Negations are pushed by the duality identities and double negations are
    collapsed on the fly. A marked greatest fixpoint (the residue of
    ``<R>@``) becomes a marked least fixpoint without dualisation; the mark
    records that its block needs cycle detection instead.
    """
    for g in _walk(f):
        if isinstance(g, (DiaReg, Delta)):
            raise ValueError("expand regular modalities before to_disjunctive")
        if isinstance(g, (Dia, Box)) and not isinstance(g.action, str):
            raise ValueError("resolve action formulas before to_disjunctive")
    return _dis(f, False, frozenset())


def _neg(f, neg):
    return Not(f) if neg else f


def _dis(f, neg, flipped):
    if isinstance(f, FF):
        return Not(FF()) if neg else FF()
    if isinstance(f, TT):
        return FF() if neg else Not(FF())
    if isinstance(f, Var):
        return _neg(Var(f.name, None, f.marked), neg != (f.name in flipped))
    if isinstance(f, Not):
        return _dis(f.arg, not neg, flipped)
    if isinstance(f, Or):
        return _neg(Or(_dis(f.left, False, flipped), _dis(f.right, False, flipped)), neg)
    if isinstance(f, And):
        return _neg(Or(_dis(f.left, True, flipped), _dis(f.right, True, flipped)), not neg)
    if isinstance(f, Dia):
        return _neg(Dia(f.action, _dis(f.arg, False, flipped)), neg)
    if isinstance(f, Box):
        return _neg(Dia(f.action, _dis(f.arg, True, flipped)), not neg)
    if isinstance(f, Mu):
        return _neg(Mu(f.name, _dis(f.body, False, flipped), None, f.marked), neg)
    if isinstance(f, Nu):
        if f.marked:
            return _neg(Mu(f.name, _dis(f.body, False, flipped), None, True), neg)
        inner = flipped | {f.name}
        return _neg(Mu(f.name, _dis(f.body, True, inner)), not neg)
    raise TypeError(f"not a formula: {f!r}")


def is_disjunctive(f):
    for g in _walk(f):
        if isinstance(g, (TT, And, Box, Nu, DiaReg, Delta)):
            return False
        if isinstance(g, Dia) and not isinstance(g.action, str):
            return False
    return True


# block labelling

def block_label(f):
    """Attach block numbers to every binder and variable.

    Follows ``bl(f, tt, 0, [])``: a binder reached with the polarity flag
    set keeps the current block, otherwise it opens block k+1; negation
    flips the flag. Each marked region (an expanded ``<R>@``) is then moved
    to a block number of its own with the same parity, so that its cycle
    check never sees variables of an unrelated fixpoint.
    """
    if not is_disjunctive(f):
        raise ValueError("block_label expects a disjunctive formula")
    labelled = _bl(f, True, 0, {})
    return _separate_marked(labelled, _unmarked_blocks(labelled))


def _bl(f, b, k, gamma):
    if isinstance(f, FF):
        return f
    if isinstance(f, Var):
        return Var(f.name, gamma[f.name], f.marked)
    if isinstance(f, Not):
        return Not(_bl(f.arg, not b, k, gamma))
    if isinstance(f, Or):
        return Or(_bl(f.left, b, k, gamma), _bl(f.right, b, k, gamma))
    if isinstance(f, Dia):
        return Dia(f.action, _bl(f.arg, b, k, gamma))
    if isinstance(f, Mu):
        kk = k if b else k + 1
        return Mu(f.name, _bl(f.body, True, kk, {**gamma, f.name: kk}), kk, f.marked)
    raise TypeError(f"unexpected node in disjunctive formula: {f!r}")


def _unmarked_blocks(f):
    used = set()

    def go(g, in_marked):
        if isinstance(g, Mu):
            in_marked = in_marked or g.marked
            if not in_marked:
                used.add(g.block)
        for h in _children(g):
            go(h, in_marked)

    go(f, False)
    return used


def _separate_marked(f, used):
    taken = set(used)

    def relabel(g, old, new):
        if isinstance(g, Var):
            return Var(g.name, new if g.block == old else g.block, g.marked)
        if isinstance(g, Mu):
            return Mu(g.name, relabel(g.body, old, new), new if g.block == old else g.block, g.marked)
        return _rebuild(g, lambda h: relabel(h, old, new))

    def go(g):
        if isinstance(g, Mu) and g.marked:
            k = g.block
            while k in taken:
                k += 2
            taken.add(k)
            return relabel(g, g.block, k)
        return _rebuild(g, go)

    return go(f)


def free_vars(f):
    """Free variables as ``(name, block)`` pairs."""
    if isinstance(f, Var):
        return {(f.name, f.block)}
    if isinstance(f, (Mu, Nu)):
        return {v for v in free_vars(f.body) if v[0] != f.name}
    out = set()
    for h in _children(f):
        out |= free_vars(h)
    return out


def is_alternation_free(f):
    ok = True

    def go(g):
        nonlocal ok
        fv = set()
        for h in _children(g):
            fv |= go(h)
        if isinstance(g, Var):
            return {(g.name, g.block)}
        if isinstance(g, (Mu, Nu)):
            fv = {v for v in fv if v[0] != g.name}
            if isinstance(g, Mu) and any(blk != g.block for _, blk in fv):
                ok = False
            return fv
        return fv

    go(f)
    return ok


def check_block_labelling(f):
    """Violations of the block-labelling well-formedness conditions."""
    problems = []
    binder_block = {}
    for g in _walk(f):
        if isinstance(g, Mu):
            if g.block is None:
                problems.append(f"binder {g.name} has no block")
            binder_block[g.name] = g.block

    def go(g, negs, env):
        if isinstance(g, Var):
            if g.block != binder_block.get(g.name):
                problems.append(f"variable {g.name} has block {g.block}, binder has {binder_block.get(g.name)}")
            return
        if isinstance(g, Not):
            go(g.arg, negs + 1, env)
            return
        if isinstance(g, Mu):
            if g.block is not None and g.block % 2 != negs % 2:
                problems.append(f"binder {g.name} in block {g.block} sits under {negs} negations")
            for name, blk in free_vars(g.body):
                if blk is not None and g.block is not None and blk > g.block:
                    problems.append(f"binder {g.name}^{g.block} has free {name}^{blk} of a larger block")
            go(g.body, negs, env)
            return
        for h in _children(g):
            go(h, negs, env)

    go(f, 0, {})
    return problems


def prepare(f, alphabet):
    """Full front end: actions, regular modalities, disjunctive form, blocks."""
    f = resolve_actions(f, alphabet)
    f = expand_regular(f)
    f = to_disjunctive(f)
    return block_label(f)


def labels_of(f):
    out = set()
    for g in _walk(f):
        if isinstance(g, (Dia, Box)):
            if isinstance(g.action, str):
                out.add(g.action)
            elif isinstance(g.action, NotSet):
                out |= g.action.labels
        if isinstance(g, (DiaReg, Delta)):
            out |= _regex_labels(g.regex)
    return out


def _regex_labels(r):
    if isinstance(r, Atom):
        if isinstance(r.action, str):
            return {r.action}
        if isinstance(r.action, NotSet):
            return set(r.action.labels)
        return set()
    if isinstance(r, Star):
        return _regex_labels(r.arg)
    return _regex_labels(r.left) | _regex_labels(r.right)


def alpha_equivalent(f, g):
    """Structural equality up to consistent renaming of bound variables."""
    def go(x, y, env):
        if type(x) is not type(y):
            return False
        if isinstance(x, Var):
            return env.get(x.name, x.name) == y.name and x.marked == y.marked and x.block == y.block
        if isinstance(x, (Mu, Nu)):
            if x.marked != y.marked or getattr(x, "block", None) != getattr(y, "block", None):
                return False
            return go(x.body, y.body, {**env, x.name: y.name})
        if isinstance(x, (Dia, Box)) and x.action != y.action:
            return False
        if isinstance(x, (DiaReg, Delta)) and x.regex != y.regex:
            return False
        cx, cy = _children(x), _children(y)
        return len(cx) == len(cy) and all(go(a, b, env) for a, b in zip(cx, cy))

    return go(f, g, {})


def semantically_equal(f1, f2, samples=20, seed=0):
    """Compare satisfaction sets on `samples` seeded random LTSs."""
    from .engine import satisfying_states
    from .generators import random_lts

    labels = sorted(labels_of(f1) | labels_of(f2)) or ["a"]
    rng = random.Random(seed)
    for _ in range(samples):
        lts = random_lts(rng, rng.randint(1, 5), labels)
        if satisfying_states(lts, f1) != satisfying_states(lts, f2):
            return False
    return True
