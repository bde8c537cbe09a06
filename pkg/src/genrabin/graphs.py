"""Small graph utilities shared by the MDP and game solvers."""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, TypeVar

N = TypeVar("N", bound=Hashable)


def sccs(nodes: Iterable[N], succ: Callable[[N], Iterable[N]]) -> list[list[N]]:
    """Strongly connected components of the subgraph induced by ``nodes``.

    Iterative Tarjan; components come out in reverse topological order
    (sinks first).  Edges to nodes outside ``nodes`` are ignored.
    """
    nodes = list(nodes)
    inside = set(nodes)
    index: dict[N, int] = {}
    low: dict[N, int] = {}
    on_stack: set[N] = set()
    stack: list[N] = []
    out: list[list[N]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in inside:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
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
                out.append(comp)
    return out


def reachable(starts: Iterable[N], succ: Callable[[N], Iterable[N]]) -> set[N]:
    seen = set(starts)
    todo = list(seen)
    while todo:
        v = todo.pop()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def is_nontrivial(comp: list[N] | set[N], succ: Callable[[N], Iterable[N]]) -> bool:
    """A component carries a cycle: more than one node, or a self-loop."""
    if len(comp) > 1:
        return True
    (v,) = tuple(comp)
    return v in set(succ(v))
