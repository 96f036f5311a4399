"""Formula-graph simplifications and the pipeline that chains them.

Every rule maps a formula graph to a formula graph with the same decoding
semantics. :func:`evaluate_constants` is the only one that needs a solver:
it finds the states whose subformula is the same constant whatever the
modalities turn out to mean, and cuts the graph there.
"""

from collections import defaultdict, deque
from dataclasses import dataclass, field

from ._graph import is_cyclic, strongly_connected_components
from .bes import MU, NU, Bes, Block, Solver, Variable, conj, disj
from .fgraph import NOT, OR, is_marked_mu, is_mu, mu_block
from .lts import Lts, strong_bisim_reduce, tau_star_a_reduce
from .mucalc import AlternationError

TT = "TT"
FF = "FF"
UNKNOWN = "UNKNOWN"
UNRESOLVED = "UNRESOLVED"

MAX_PASSES = 100


def eliminate_or(g):
    return tau_star_a_reduce(g, {OR})


def eliminate_unguarded(g):
    """Drop ``%mu.k`` self-loops; marked self-loops stay, they witness a cycle."""
    trans = {(s, a, t) for s, a, t in g.transitions
             if not (s == t and is_mu(a) and not is_marked_mu(a))}
    return Lts(g.num_states, g.initial, frozenset(trans))


def eliminate_double_neg(g):
    trans = set(g.transitions)
    while True:
        out = defaultdict(list)
        for s, a, t in trans:
            out[s].append((a, t))
        found = set()
        for s, a, t in trans:
            if a == NOT and len(out[t]) == 1 and out[t][0][0] == NOT:
                found.add((s, t, out[t][0][1]))
        if not found:
            return Lts(g.num_states, g.initial, frozenset(trans))
        for s1, s2, s3 in found:
            trans.discard((s1, NOT, s2))
            trans.add((s1, OR, s3))


def eliminate_mu(g):
    """Relabel as ``%or`` the mu-transitions whose variable cannot occur."""
    reach = g.reachable_states()
    comp_of = {}
    for idx, comp in enumerate(strongly_connected_components(reach, g.successors)):
        for s in comp:
            comp_of[s] = idx
    preds = defaultdict(list)
    for s, a, t in g.transitions:
        if s in comp_of:
            preds[t].append(s)
    memo = {}

    def single_pred(s):
        if s in memo:
            return memo[s]
        memo[s] = False
        ok = False
        if s != g.initial and len(preds[s]) == 1:
            p = preds[s][0]
            out = g.out(p)
            if len(out) == 1 and is_mu(out[0][0]):
                ok = True
            else:
                ok = single_pred(p)
        memo[s] = ok
        return ok

    trans = set()
    for s, a, t in g.transitions:
        if (s in comp_of and is_mu(a) and not is_marked_mu(a)
                and (comp_of[s] != comp_of[t] or single_pred(s))):
            trans.add((s, OR, t))
        else:
            trans.add((s, a, t))
    return Lts(g.num_states, g.initial, frozenset(trans))


def share(g):
    return strong_bisim_reduce(g)


# constant evaluation

def _kind(a):
    if a == NOT:
        return "not"
    if a == OR:
        return "or"
    if is_mu(a):
        return "mu"
    return "dia"


def constant_values(g):
    """``{state: (definitely_true, definitely_false)}`` for reachable states.

    Strongly connected components are solved bottom-up, so every value a
    component reads from outside is already a Boolean.
    """
    reach = g.reachable_states()
    dt, df = {}, {}
    for comp in strongly_connected_components(reach, g.successors):
        if not is_cyclic(comp, g.successors):
            s = comp[0]
            t_val, f_val = False, True
            for a, t in g.out(s):
                k = _kind(a)
                if k == "not":
                    t_val = t_val or df[t]
                    f_val = f_val and dt[t]
                elif k == "dia":
                    f_val = f_val and df[t]
                else:
                    t_val = t_val or dt[t]
                    f_val = f_val and df[t]
            dt[s], df[s] = t_val, f_val
            continue
        members = set(comp)
        labels = [a for s in comp for a, t in g.out(s) if t in members and is_mu(a)]
        if not labels:
            raise ValueError(f"circuit without mu-transition through states {sorted(comp)}")
        if len({mu_block(a) for a in labels}) > 1:
            raise AlternationError(f"states {sorted(comp)[:6]} mix fixpoint blocks on one circuit")
        if any(is_marked_mu(a) for a in labels):
            _solve_marked(g, comp, members, dt, df)
        else:
            _solve_unmarked(g, comp, members, dt, df)
    return {s: (dt[s], df[s]) for s in reach}


def _constants():
    true = Variable(2, "true")
    false = Variable(2, "false")
    return Block(MU, {true: conj(), false: disj()}), true, false


def _solve_unmarked(g, comp, members, dt, df):
    # parities are relative to the binders, which sit at parity 0
    binders = sorted(s for s in comp for a, t in g.out(s) if is_mu(a) and t in members)
    parity = {binders[0]: 0}
    queue = deque([binders[0]])
    while queue:
        s = queue.popleft()
        for a, t in g.out(s):
            if t not in members:
                continue
            p = parity[s] ^ (a == NOT)
            if t not in parity:
                parity[t] = p
                queue.append(t)
            elif parity[t] != p:
                raise AlternationError(f"state {t} is reached under both negation parities on one circuit")
    if any(parity[s] for s in binders):
        raise AlternationError(f"binders of states {binders[:6]} sit under different negation parities")
    const_block, true, false = _constants()

    # T at parity 0 and F at parity 1 are least fixpoints; the others greatest
    def var(kind, s):
        block = 0 if (kind == "T") == (parity[s] == 0) else 1
        return Variable(block, f"{kind}{s}")

    def lit(b):
        return true if b else false

    eqs = {0: {}, 1: {}}
    for s in comp:
        t_args, f_args = [], []
        for a, t in g.out(s):
            k = _kind(a)
            inside = t in members
            if k == "not":
                t_args.append(var("F", t) if inside else lit(df[t]))
                f_args.append(var("T", t) if inside else lit(dt[t]))
            elif k == "dia":
                f_args.append(var("F", t) if inside else lit(df[t]))
            else:
                t_args.append(var("T", t) if inside else lit(dt[t]))
                f_args.append(var("F", t) if inside else lit(df[t]))
        tv, fv = var("T", s), var("F", s)
        eqs[tv.block][tv] = disj(*t_args)
        eqs[fv.block][fv] = conj(*f_args)
    bes = Bes([Block(MU, eqs[0]), Block(NU, eqs[1]), const_block])
    solver = Solver(bes)
    for s in comp:
        dt[s] = solver.solve(var("T", s))
        df[s] = solver.solve(var("F", s))


def _solve_marked(g, comp, members, dt, df):
    """Marked component: true iff a modality-free path reaches a true exit or
    loops through a marked binder forever. Modalities never help to be
    definitely true, and make a state possibly true when they are taken as
    free moves; the complement of the latter is definitely false."""
    for s in comp:
        for a, t in g.out(s):
            if a == NOT and t in members:
                raise AlternationError(f"negation inside the marked region at state {s}")
    dt.update(_marked_reach(g, comp, members, dt, df, through_modalities=False))
    possibly = _marked_reach(g, comp, members, dt, df, through_modalities=True)
    for s in comp:
        df[s] = not possibly[s]


def _marked_reach(g, comp, members, dt, df, through_modalities):
    const_block, true, false = _constants()
    eqs = {}
    for s in comp:
        args = []
        for a, t in g.out(s):
            k = _kind(a)
            if k == "dia" and not through_modalities:
                continue
            if t not in members:
                if through_modalities:
                    ok = not dt[t] if k == "not" else not df[t]
                else:
                    ok = df[t] if k == "not" else dt[t]
                args.append(true if ok else false)
            elif is_marked_mu(a):
                aux = Variable(0, f"M{s}.{t}", marked=True)
                eqs[aux] = disj(Variable(0, f"S{t}"))
                args.append(aux)
            else:
                args.append(Variable(0, f"S{t}"))
        eqs[Variable(0, f"S{s}")] = disj(*args)
    bes = Bes([Block(MU, eqs), Block(NU, {}), const_block])
    solver = Solver(bes, cycles=True)
    return {s: solver.solve(Variable(0, f"S{s}")) for s in comp}


def evaluate_constants(g):
    """Apply the constant rules and report ``{state: TT | FF | UNKNOWN}``.

    A definitely true state keeps a single ``%not`` edge into a fresh
    deadlock; a definitely false one loses all its edges; edges into
    constants that cannot contribute are dropped. The result is restricted
    to reachable states and renumbered.
    """
    values = constant_values(g)
    status = {}
    for s, (t_val, f_val) in values.items():
        if t_val and f_val:
            raise AssertionError(f"state {s} evaluated to both constants")
        status[s] = TT if t_val else FF if f_val else UNKNOWN
    sink = g.num_states
    trans = set()
    for s, st in status.items():
        if st == TT:
            trans.add((s, NOT, sink))
            continue
        if st == FF:
            continue
        for a, t in g.out(s):
            if a == NOT and status[t] == TT:
                continue
            if a != NOT and status[t] == FF:
                continue
            trans.add((s, a, t))
    out = Lts(g.num_states + 1, g.initial, frozenset(trans)).restrict_reachable()
    return out, status


def graph_verdict(g):
    """TT or FF for the canonical constant graphs, UNRESOLVED otherwise."""
    g = g.restrict_reachable()
    if g.num_states == 1 and not g.transitions:
        return FF
    if g.num_states == 2 and g.transitions == frozenset({(0, NOT, 1)}):
        return TT
    return UNRESOLVED


# pipeline

RULES = (
    ("or", eliminate_or),
    ("unguarded", eliminate_unguarded),
    ("double-neg", eliminate_double_neg),
    ("mu", eliminate_mu),
    ("constants", lambda g: evaluate_constants(g)[0]),
    ("share", share),
)


@dataclass
class SimplifyReport:
    passes: int = 0
    applied: dict = field(default_factory=lambda: {name: 0 for name, _ in RULES})
    before: tuple = (0, 0)
    after: tuple = (0, 0)
    verdict: str = UNRESOLVED

    def table(self):
        rows = [("Step", "States", "Transitions"),
                ("input", *map(str, self.before)),
                ("simplified", *map(str, self.after))]
        return format_table(rows)


def format_table(rows):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def size(g):
    return g.num_states, len(g.transitions)


def simplify_pipeline(g):
    """Run every rule in order until a whole pass changes nothing."""
    report = SimplifyReport(before=size(g))
    current = g
    while True:
        if report.passes >= MAX_PASSES:
            raise RuntimeError(f"simplification did not stabilise within {MAX_PASSES} passes")
        report.passes += 1
        start = current
        for name, rule in RULES:
            nxt = rule(current)
            if nxt != current:
                report.applied[name] += 1
            current = nxt
        if current == start:
            break
    report.after = size(current)
    report.verdict = graph_verdict(current)
    return current, report
