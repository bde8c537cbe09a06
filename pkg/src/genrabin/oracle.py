"""Brute-force reference computations used to validate the solvers.

The MDP oracle enumerates memoryless deterministic strategies on the product
with the degeneralized (plain Rabin) automaton, where such strategies are
optimal.  Every induced Markov chain is solved directly: a bottom SCC is
good when its vertex set satisfies some pair.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .automata import build_dgrw, degeneralize
from .graphs import reachable, sccs
from .ltl import Formula, canonicalize, parse
from .mdp import Mdp, product, solve_linear_exact

__all__ = ["OracleTooLarge", "oracle_max_prob", "memoryless_strategies"]


class OracleTooLarge(RuntimeError):
    pass


def memoryless_strategies(m: Mdp, limit: int):
    """Yield choice maps covering every distinct strategy on the reachable part.

    Choices are only fixed at vertices reachable under the partial strategy,
    so strategies differing solely on unreachable vertices are not repeated.
    """
    count = 0

    def succ_under(choice):
        def s(v):
            if m.is_prob(v):
                return m.succ[v]
            c = choice.get(v)
            return m.succ[v] if c is None else (c,)

        return s

    def rec(choice: dict[int, int]):
        nonlocal count
        seen = {m.init}
        todo = [m.init]
        open_vertex = None
        while todo:
            v = todo.pop()
            if not m.is_prob(v) and v not in choice:
                if len(m.succ[v]) == 1:
                    choice[v] = m.succ[v][0]
                elif open_vertex is None or v < open_vertex:
                    open_vertex = v
                    continue
                else:
                    continue
            for w in succ_under(choice)(v):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if open_vertex is None:
            count += 1
            if count > limit:
                raise OracleTooLarge(f"more than {limit} memoryless strategies")
            yield dict(choice)
            return
        for w in m.succ[open_vertex]:
            yield from rec({**choice, open_vertex: w})

    yield from rec({})


def _chain(m: Mdp, choice: dict[int, int]):
    def s(v):
        return m.succ[v] if m.is_prob(v) else (choice[v],)

    verts = sorted(reachable([m.init], s))
    return verts, s


def _good_vertices(verts, s, cond) -> set[int]:
    good: set[int] = set()
    for comp in sccs(verts, s):
        cset = set(comp)
        if all(w in cset for v in comp for w in s(v)) and cond.holds(cset):
            good |= cset
    return good


def _float_value(m: Mdp, verts, s, good) -> float:
    can = reachable(good, _rev(verts, s)) if good else set()
    idx = {v: i for i, v in enumerate(v for v in verts if v in can and v not in good)}
    if m.init in good:
        return 1.0
    if m.init not in idx:
        return 0.0
    size = len(idx)
    a = np.eye(size)
    b = np.zeros(size)
    for v, i in idx.items():
        if m.is_prob(v):
            pairs = zip(m.succ[v], (float(p) for p in m.probs[v]))
        else:
            pairs = [(s(v)[0], 1.0)]
        for w, p in pairs:
            if w in good:
                b[i] += p
            elif w in idx:
                a[i, idx[w]] -= p
    return float(np.linalg.solve(a, b)[idx[m.init]])


def _exact_value(m: Mdp, verts, s, good) -> Fraction:
    can = reachable(good, _rev(verts, s)) if good else set()
    if m.init in good:
        return Fraction(1)
    if m.init not in can:
        return Fraction(0)
    rows = {}
    for v in verts:
        if v not in can or v in good:
            continue
        coeffs: dict[int, Fraction] = {}
        const = Fraction(0)
        pairs = zip(m.succ[v], m.probs[v]) if m.is_prob(v) else [(s(v)[0], Fraction(1))]
        for w, p in pairs:
            if w in good:
                const += p
            elif w in can:
                coeffs[w] = coeffs.get(w, Fraction(0)) + p
        rows[v] = (coeffs, const)
    return solve_linear_exact(rows)[m.init]


def _rev(verts, s):
    pred: dict[int, list[int]] = {v: [] for v in verts}
    for v in verts:
        for w in s(v):
            pred[w].append(v)
    return lambda w: pred[w]


def oracle_max_prob(m: Mdp, f: Formula | str, *, limit: int = 20_000) -> Fraction:
    """Exact maximal satisfaction probability by exhaustive strategy search."""
    if isinstance(f, str):
        f = parse(f)
    aut = degeneralize(build_dgrw(canonicalize(f)))
    p = product(m, aut)
    pm, cond = p.mdp, p.condition
    scored = []
    for choice in memoryless_strategies(pm, limit):
        verts, s = _chain(pm, choice)
        good = _good_vertices(verts, s, cond)
        scored.append((_float_value(pm, verts, s, good), choice, verts, s, good))
    best = max(x[0] for x in scored)
    return max(_exact_value(pm, verts, s, good) for val, _, verts, s, good in scored if val >= best - 1e-9)
