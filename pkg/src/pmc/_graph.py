"""Small graph helpers shared by the LTS, formula-graph and BES code."""

from collections import deque


def strongly_connected_components(roots, successors):
    """Yield the SCCs reachable from `roots`, each as a list of nodes.

    Iterative Tarjan. Components come out in reverse topological order:
    every component is yielded after all components it can reach, which is
    the order a bottom-up evaluator wants.
    """
    index = {}
    low = {}
    on_stack = set()
    stack = []
    counter = 0
    for root in roots:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    pushed = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                yield comp


def is_cyclic(component, successors):
    """True if the component carries at least one circuit."""
    if len(component) > 1:
        return True
    v = component[0]
    return any(w == v for w in successors(v))


def reachable(roots, successors):
    """Nodes reachable from `roots`, in breadth-first discovery order."""
    seen = {}
    queue = deque()
    for r in roots:
        if r not in seen:
            seen[r] = len(seen)
            queue.append(r)
    while queue:
        v = queue.popleft()
        for w in successors(v):
            if w not in seen:
                seen[w] = len(seen)
                queue.append(w)
    return list(seen)
