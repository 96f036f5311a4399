"""Boolean equation systems.

A :class:`Bes` is an ordered tuple of blocks; block ``i`` holds equations for
variables whose ``block`` field is ``i``. A right-hand side is a plain
disjunction or conjunction of variables, so ``or()`` is false and ``and()``
is true. The first block is the outermost one.

Three solvers: :func:`naive_solve` (nested Knaster-Tarski iteration, the test
oracle), :func:`solve_local` (on-the-fly, linear, alternation-free) and
:func:`solve_with_cycles` for disjunctive least-fixpoint blocks with marked
variables, where a marked variable on a cycle of its block is true.
"""

from collections import deque
from dataclasses import dataclass

from ._graph import is_cyclic, strongly_connected_components
from .mucalc import AlternationError

MU = "mu"
NU = "nu"


@dataclass(frozen=True, order=True)
class Variable:
    block: int
    key: str
    marked: bool = False

    def __str__(self):
        return f"B{self.block}.{self.key}" + ("@" if self.marked else "")


@dataclass(frozen=True)
class Rhs:
    op: str
    args: tuple = ()

    def __post_init__(self):
        if self.op not in ("or", "and"):
            raise ValueError(f"bad operator {self.op!r}")
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        return f"{self.op}(" + ", ".join(str(a) for a in self.args) + ")"


def disj(*args):
    return Rhs("or", args)


def conj(*args):
    return Rhs("and", args)


FALSE = Rhs("or")
TRUE = Rhs("and")


@dataclass(frozen=True)
class Block:
    sign: str
    equations: tuple

    def __post_init__(self):
        if self.sign not in (MU, NU):
            raise ValueError(f"bad sign {self.sign!r}")
        eqs = self.equations
        if isinstance(eqs, dict):
            eqs = eqs.items()
        object.__setattr__(self, "equations", tuple(sorted(eqs)))
        if any(v.marked for v, _ in self.equations):
            if self.sign != MU:
                raise ValueError("marked variables need a least-fixpoint block")
            for v, rhs in self.equations:
                if rhs.op != "or":
                    raise ValueError(f"{v}: marked blocks are purely disjunctive")

    @property
    def marked(self):
        return any(v.marked for v, _ in self.equations)


class Bes:
    def __init__(self, blocks):
        self.blocks = tuple(blocks)
        self.rhs = {}
        for idx, blk in enumerate(self.blocks):
            for v, rhs in blk.equations:
                if v.block != idx:
                    raise ValueError(f"{v} defined in block {idx}")
                if v in self.rhs:
                    raise ValueError(f"{v} defined twice")
                self.rhs[v] = rhs
        for v, rhs in self.rhs.items():
            for a in rhs.args:
                if a not in self.rhs:
                    raise ValueError(f"{v} refers to undefined {a}")

    def sign(self, v):
        return self.blocks[v.block].sign

    @property
    def variables(self):
        return sorted(self.rhs)

    def dump(self):
        lines = []
        for blk in self.blocks:
            for v, rhs in blk.equations:
                lines.append(f"{v} ={blk.sign} {rhs}")
        return "\n".join(lines) + ("\n" if lines else "")

    def __repr__(self):
        return f"Bes({len(self.blocks)} blocks, {len(self.rhs)} variables)"


def _eval(rhs, val):
    if rhs.op == "or":
        return any(val[a] for a in rhs.args)
    return all(val[a] for a in rhs.args)


def naive_solve(bes):
    """Solution of every variable by nested fixpoint iteration."""
    if any(v.marked for v in bes.rhs):
        raise ValueError("naive_solve does not handle marked variables")
    val = {}
    blocks = bes.blocks

    def solve_from(i):
        if i == len(blocks):
            return
        blk = blocks[i]
        for v, _ in blk.equations:
            val[v] = blk.sign == NU
        while True:
            solve_from(i + 1)
            new = {v: _eval(rhs, val) for v, rhs in blk.equations}
            if all(val[v] == x for v, x in new.items()):
                return
            val.update(new)

    solve_from(0)
    return val


def unmark(bes):
    """Equivalent marked-free system: every marked block becomes a greatest
    fixpoint block of its marked variables wrapped around a least fixpoint
    block of the others. Block numbers are reassigned."""
    plan = []
    for blk in bes.blocks:
        if blk.marked:
            plan.append([(NU, [e for e in blk.equations if e[0].marked]),
                         (MU, [e for e in blk.equations if not e[0].marked])])
        else:
            plan.append([(blk.sign, list(blk.equations))])
    rename = {}
    new_index = 0
    for old, parts in enumerate(plan):
        for sign, eqs in parts:
            for v, _ in eqs:
                rename[v] = Variable(new_index, v.key + ("@" if v.marked else ""))
            new_index += 1
    blocks = []
    for parts in plan:
        for sign, eqs in parts:
            blocks.append(Block(sign, tuple((rename[v], Rhs(r.op, [rename[a] for a in r.args])) for v, r in eqs)))
    return Bes(blocks), rename


class Solver:
    """Local solver with memoised results, shared by successive queries.

    ``explored`` counts the variables solved so far.
    """

    def __init__(self, bes, cycles=False):
        self.bes = bes
        self.cycles = cycles
        self.value = {}
        self.explored = 0

    def solve(self, target):
        if target not in self.bes.rhs:
            raise KeyError(f"unknown variable {target}")
        if target in self.value:
            return self.value[target]
        rhs = self.bes.rhs

        def succ(v):
            return () if v in self.value else rhs[v].args

        for comp in strongly_connected_components([target], succ):
            if comp[0] in self.value:
                continue
            self._solve_component(comp)
        return self.value[target]

    def _solve_component(self, comp):
        bes = self.bes
        rhs = bes.rhs
        members = set(comp)
        cyclic = is_cyclic(comp, lambda v: rhs[v].args)
        signs = {bes.sign(v) for v in comp}
        if cyclic and len(signs) > 1:
            raise AlternationError("cyclic dependency between least and greatest fixpoint blocks: "
                                   + ", ".join(str(v) for v in sorted(comp)[:4]))
        sign = signs.pop()
        marked = [v for v in comp if v.marked]
        if marked and not self.cycles:
            raise ValueError(f"marked variable {marked[0]} needs solve_with_cycles")
        seeded = self._marked_on_cycles(comp, members) if marked else set()
        # MU: truth spreads upward from satisfied equations; NU: falsity does
        goal = sign == MU
        spread_op = "or" if goal else "and"
        need = {}
        users = {v: [] for v in comp}
        queue = deque()
        for v in sorted(comp):
            r = rhs[v]
            n = 1 if r.op == spread_op else len(r.args)
            for a in r.args:
                if a in members:
                    users[a].append(v)
                elif self.value[a] == goal:
                    n -= 1
            if r.op == spread_op and not r.args:
                n = 1
            need[v] = n
            if n <= 0 or v in seeded:
                queue.append(v)
        result = {v: not goal for v in comp}
        while queue:
            v = queue.popleft()
            if result[v] == goal:
                continue
            result[v] = goal
            for u in users[v]:
                need[u] -= 1
                if need[u] <= 0 and result[u] != goal:
                    queue.append(u)
        self.value.update(result)
        self.explored += len(comp)

    def _marked_on_cycles(self, comp, members):
        rhs = self.bes.rhs
        out = set()
        for block in {v.block for v in comp if v.marked}:
            def succ(v, block=block):
                return [a for a in rhs[v].args if a in members and a.block == block]
            nodes = sorted(v for v in comp if v.block == block)
            for sub in strongly_connected_components(nodes, succ):
                if is_cyclic(sub, succ):
                    out.update(v for v in sub if v.marked)
        return out


def solve_local(bes, target):
    return Solver(bes).solve(target)


def solve_with_cycles(bes, target):
    return Solver(bes, cycles=True).solve(target)
