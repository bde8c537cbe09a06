"""Two-player games with generalized Rabin (GRP) winning conditions.

Two solvers are provided.  :func:`solve_ranking` computes the least good
ranking by worklist lifting and extracts a strategy whose memory is the
waiting vector.  :func:`solve_symbolic` evaluates the nested fixpoint
characterization of the winning region over explicit vertex sets.  The two
are independent and are cross-checked in the tests.

Rank values are flat tuples ``(w0, p1, w1, ..., pk, wk)`` whose
lexicographic order is the ranking order; ``p`` is a permutation of
``1..k``.  Infinity is the one-element tuple ``(n + 1,)``, which compares
above every finite rank.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Iterator, Sequence

from ._text import FormatError, id_list, int_of, lines_of, vertex_of
from .automata import Automaton, GrpCondition, GrpPair, ResourceLimitError, build_dgrw
from .graphs import is_nontrivial, sccs
from .ltl import Formula, canonicalize, parse
from .mdp import _lift

__all__ = [
    "Game",
    "GameError",
    "GrpGame",
    "Ranking",
    "Strategy",
    "parse_game",
    "format_game",
    "game_product",
    "degeneralized_game",
    "RankingSolver",
    "solve_ranking",
    "verify_strategy",
    "solve_symbolic",
    "solve_ltl_game",
    "LtlGameResult",
    "format_strategy",
    "enumerate_memory_strategies",
    "player0_can_win",
]


class GameError(FormatError):
    pass


@dataclass
class Game:
    """A game arena with vertex labels; ``owner[v]`` is 0 or 1."""

    succ: list[tuple[int, ...]]
    owner: list[int]
    labels: list[frozenset[str]]
    init: int = 0
    names: list[str] | None = None

    def __post_init__(self):
        n = len(self.succ)
        if len(self.owner) != n or len(self.labels) != n:
            raise GameError("succ, owner and labels must have equal length")
        if not 0 <= self.init < n:
            raise GameError("initial vertex out of range")
        for v, ws in enumerate(self.succ):
            if not ws:
                raise GameError(f"vertex {v} has no outgoing edge")
            if any(not 0 <= w < n for w in ws):
                raise GameError(f"dangling vertex id among successors of {v}")
            if len(set(ws)) != len(ws):
                raise GameError(f"vertex {v} has a repeated successor")
            if self.owner[v] not in (0, 1):
                raise GameError(f"vertex {v} has owner {self.owner[v]}")

    @property
    def n(self) -> int:
        return len(self.succ)

    def predecessors(self) -> list[list[int]]:
        pred: list[list[int]] = [[] for _ in range(self.n)]
        for u, ws in enumerate(self.succ):
            for w in ws:
                pred[w].append(u)
        return pred


def parse_game(text: str) -> Game:
    it = lines_of(text)
    first = next(it, None)
    if first is None or first[1] != "game":
        raise GameError("missing 'game' header", first[0] if first else 0)
    n = init = None
    owners: set[int] = set()
    p1: set[int] = set()
    labels: dict[int, frozenset[str]] = {}
    edges: dict[int, list[int]] = {}
    for lineno, line in it:
        head, _, rest = line.partition(" ")
        try:
            if head == "states:":
                n = int_of(rest.strip(), lineno)
                if n <= 0:
                    raise GameError("need at least one state", lineno)
            elif head == "init:":
                init = vertex_of(rest.strip(), n, lineno)
            elif head == "player0:":
                id_list(rest, n, lineno, owners)
            elif head == "player1:":
                p1.update(id_list(rest, n, lineno, owners))
            elif head == "label":
                vid, _, names = rest.partition(":")
                v = vertex_of(vid.strip(), n, lineno)
                if v in labels:
                    raise GameError(f"duplicate label for vertex {v}", lineno)
                labels[v] = frozenset(names.split())
            elif head == "edge":
                toks = rest.split()
                if len(toks) != 2:
                    raise GameError("edge needs two vertex ids", lineno)
                u, w = (vertex_of(t, n, lineno) for t in toks)
                if w in edges.setdefault(u, []):
                    raise GameError(f"duplicate edge {u} {w}", lineno)
                edges[u].append(w)
            else:
                raise GameError(f"unknown directive {head!r}", lineno)
        except FormatError as exc:
            if isinstance(exc, GameError):
                raise
            raise GameError(str(exc).split(": ", 1)[-1], exc.lineno) from None
    if n is None or init is None:
        raise GameError("'states:' and 'init:' are required")
    if len(owners) != n:
        missing = sorted(set(range(n)) - owners)
        raise GameError(f"vertices {missing} have no owner")
    for v in range(n):
        if not edges.get(v):
            raise GameError(f"vertex {v} has no outgoing edge")
    return Game(
        [tuple(edges[v]) for v in range(n)],
        [1 if v in p1 else 0 for v in range(n)],
        [labels.get(v, frozenset()) for v in range(n)],
        init,
    )


def format_game(g: Game) -> str:
    lines = ["game", f"states: {g.n}", f"init: {g.init}"]
    lines.append("player0: " + " ".join(str(v) for v in range(g.n) if g.owner[v] == 0))
    lines.append("player1: " + " ".join(str(v) for v in range(g.n) if g.owner[v] == 1))
    for v, lab in enumerate(g.labels):
        if lab:
            lines.append(f"label {v}: {' '.join(sorted(lab))}")
    for v, ws in enumerate(g.succ):
        lines += [f"edge {v} {w}" for w in ws]
    return "\n".join(line.rstrip() for line in lines) + "\n"


@dataclass
class GrpGame:
    """A game together with a GRP condition over its vertices."""

    game: Game
    condition: GrpCondition
    states: list[tuple] | None = None

    def __post_init__(self):
        n = self.game.n
        for p in self.condition.pairs:
            if any(not 0 <= v < n for s in (p.fin, *p.inf) for v in s):
                raise GameError("condition mentions an unknown vertex")

    @property
    def n(self) -> int:
        return self.game.n


def game_product(g: Game, aut: Automaton) -> GrpGame:
    """Reachable product; a step into ``w`` feeds the label of ``w`` to the automaton."""
    amask = [aut.letter_mask(lab) for lab in g.labels]
    start = (g.init, aut.delta[aut.initial][amask[g.init]])
    states = [start]
    index = {start: 0}
    succ: list[tuple[int, ...]] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        v, q = states[i]
        row = []
        for w in g.succ[v]:
            t = (w, aut.delta[q][amask[w]])
            j = index.get(t)
            if j is None:
                j = index[t] = len(states)
                states.append(t)
                queue.append(j)
            row.append(j)
        succ.append(tuple(row))
    pg = Game(succ, [g.owner[v] for v, _ in states], [g.labels[v] for v, _ in states], 0)
    return GrpGame(pg, _lift(aut.condition, [q for _, q in states]), states)


# ---------------------------------------------------------------- waiting vectors


def waiting_vectors(cond: GrpCondition) -> list[tuple[int, ...]]:
    """All of ``B`` in lexicographic order; entry ``i`` ranges over ``1..width_i``."""
    return list(cartesian(*(range(1, w + 1) for w in cond.widths)))


def next_wf(cond: GrpCondition, v: int, wf: Sequence[int]) -> tuple[int, ...]:
    """Advance (cyclically) every component whose awaited Buchi set contains ``v``."""
    out = []
    for p, w in zip(cond.pairs, wf):
        out.append(w % p.width + 1 if v in p.inf[w - 1] else w)
    return tuple(out)


def degeneralized_game(gg: GrpGame) -> GrpGame:
    """Plain Rabin game on ``V x B`` tracking the waiting vector explicitly.

    Vertex ``(v, wf)`` moves to ``(w, next_v(wf))``.  Pair ``i`` keeps ``F_i``
    and asks for infinitely many wrap-arounds of component ``i``.
    """
    cond = gg.condition
    g = gg.game
    start = (g.init, (1,) * len(cond.pairs))
    states = [start]
    index = {start: 0}
    succ: list[tuple[int, ...]] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        v, wf = states[i]
        nwf = next_wf(cond, v, wf)
        row = []
        for w in g.succ[v]:
            t = (w, nwf)
            j = index.get(t)
            if j is None:
                j = index[t] = len(states)
                states.append(t)
                queue.append(j)
            row.append(j)
        succ.append(tuple(row))
    pairs = []
    for i, p in enumerate(cond.pairs):
        fin = frozenset(s for s, (v, _) in enumerate(states) if v in p.fin)
        hit = frozenset(
            s for s, (v, wf) in enumerate(states) if wf[i] == p.width and v in p.inf[p.width - 1]
        )
        pairs.append(GrpPair(fin, (hit,)))
    dg = Game(succ, [g.owner[v] for v, _ in states], [g.labels[v] for v, _ in states], 0)
    return GrpGame(dg, GrpCondition(tuple(pairs)), states)


# ---------------------------------------------------------------- ranking


@dataclass
class Strategy:
    """Player-0 strategy with memory ``B`` updated by ``next_v``.

    ``choice[(v, b)]`` is the chosen successor of player-0 vertex ``v`` when
    the memory holds waiting vector ``wfs[b]``; ``starts`` are the
    ``(v, b)`` entries the strategy claims to win from.
    """

    wfs: list[tuple[int, ...]]
    choice: dict[tuple[int, int], int]
    starts: frozenset[tuple[int, int]]

    @property
    def memory(self) -> int:
        return len(self.wfs)


@dataclass
class Ranking:
    values: list[tuple[int, ...]]  # entry v * |B| + b
    n_wf: int
    infinity: tuple[int, ...]
    lifts: int = 0

    def __call__(self, v: int, b: int) -> tuple[int, ...]:
        return self.values[v * self.n_wf + b]

    def finite(self, v: int, b: int) -> bool:
        return self(v, b) != self.infinity


class RankingSolver:
    """Least good ranking of a GRP game by worklist lifting.

    The lifting operator is ``max(r(v,wf), min_increase(v, wf, next(v,wf)))``
    where ``min_increase`` returns the least rank (in lexicographic order)
    that is greater than its argument with respect to ``v`` and ``wf``.
    """

    def __init__(self, gg: GrpGame, *, budget: int = 10**9):
        self.gg = gg
        g, cond = gg.game, gg.condition
        self.n = n = g.n
        self.k = k = len(cond.pairs)
        self.wfs = waiting_vectors(cond)
        self.nb = len(self.wfs)
        size = math.factorial(k) * (n + 1) ** (k + 1)
        if size * self.nb > budget:
            raise ResourceLimitError(f"ranking domain {size} x |B| {self.nb} exceeds budget {budget}")
        self.domain_size = size + 1
        self.inf = (n + 1,)
        windex = {wf: i for i, wf in enumerate(self.wfs)}
        # in_f[v][p-1], in_i[v][p-1][b]: membership of v for pair p under wf b
        self.in_f = [[v in p.fin for p in cond.pairs] for v in range(n)]
        self.in_i = [
            [[v in p.inf[wf[i] - 1] for wf in self.wfs] for i, p in enumerate(cond.pairs)] for v in range(n)
        ]
        self.nxt = [[windex[next_wf(cond, v, wf)] for wf in self.wfs] for v in range(n)]
        self.bottom = (0,) + tuple(x for p in range(1, k + 1) for x in (p, 0))

    # -- order -----------------------------------------------------------

    def rank_greater(self, v: int, b: int, x: tuple, y: tuple) -> bool:
        """``x >_{v,wf} y`` for ``wf = wfs[b]``; infinity is the top element."""
        inf = self.inf
        if y == inf:
            return False
        if x == inf:
            return True
        if x[0] != y[0]:
            return x[0] > y[0]
        in_f, in_i = self.in_f[v], self.in_i[v]
        for lvl in range(1, self.k + 1):
            p, w = x[2 * lvl - 1], x[2 * lvl]
            q, u = y[2 * lvl - 1], y[2 * lvl]
            if p != q:
                return p > q
            if in_f[p - 1]:
                return False
            if w > u or in_i[p - 1][b]:
                return True
            if w < u:
                return False
        return False

    # -- minimal increase ------------------------------------------------

    def _completion(self, prefix: tuple, used: set[int]) -> tuple:
        rest = [p for p in range(1, self.k + 1) if p not in used]
        return prefix + tuple(x for p in rest for x in (p, 0))

    def min_increase(self, v: int, b: int, y: tuple) -> tuple:
        """Least rank ``x`` (lexicographically) with ``x >_{v,wf} y``."""
        if y == self.inf:
            return self.inf
        k, n = self.k, self.n
        in_f, in_i = self.in_f[v], self.in_i[v]
        used: set[int] = set()
        # Scan levels; at each level remember the best option that leaves
        # the prefix unchanged, falling back to later levels otherwise.
        fallback = None  # best candidate found so far (from a shallower level)
        prefix = (y[0],)
        for lvl in range(1, k + 1):
            q, u = y[2 * lvl - 1], y[2 * lvl]
            higher = [p for p in range(q + 1, k + 1) if p not in used]
            bump_index = None
            if higher:
                p = higher[0]
                bump_index = self._completion(prefix + (p, 0), used | {p})
            if in_f[q - 1]:
                return bump_index if bump_index is not None else self._outer(y, fallback)
            if in_i[q - 1][b]:
                return self._completion(prefix + (q, 0), used | {q})
            # deeper options keep (q, u) and beat any weight or index bump here
            cand = None
            if u + 1 <= n:
                cand = self._completion(prefix + (q, u + 1), used | {q})
            if bump_index is not None and (cand is None):
                cand = bump_index
            if cand is not None:
                fallback = cand
            used.add(q)
            prefix = prefix + (q, u)
        return self._outer(y, fallback)

    def _outer(self, y: tuple, fallback) -> tuple:
        if fallback is not None:
            return fallback
        if y[0] + 1 <= self.n:
            return self._completion((y[0] + 1,), set())
        return self.inf

    # -- solving ---------------------------------------------------------

    def next_value(self, r: list, v: int, b: int) -> tuple:
        g = self.gg.game
        nb = self.nb
        b2 = self.nxt[v][b]
        vals = [r[w * nb + b2] for w in g.succ[v]]
        return min(vals) if g.owner[v] == 0 else max(vals)

    def lift(self, r: list, v: int, b: int) -> tuple:
        cur = r[v * self.nb + b]
        if cur == self.inf:
            return cur
        inc = self.min_increase(v, b, self.next_value(r, v, b))
        return inc if inc > cur else cur

    def solve(self, *, naive: bool = False) -> Ranking:
        g = self.gg.game
        nb, n = self.nb, self.n
        r = [self.bottom] * (n * nb)
        lifts = 0
        bound = n * nb * self.domain_size
        if naive:
            changed = True
            while changed:
                changed = False
                for v in range(n):
                    for b in range(nb):
                        new = self.lift(r, v, b)
                        if new != r[v * nb + b]:
                            r[v * nb + b] = new
                            lifts += 1
                            changed = True
            return Ranking(r, nb, self.inf, lifts)
        pred = g.predecessors()
        # affected[w][b2]: entries (u, b) whose next() reads r(w, b2)
        back = [[[] for _ in range(nb)] for _ in range(n)]
        for u in range(n):
            for b in range(nb):
                back[u][self.nxt[u][b]].append(b)
        stack = [(v, b) for v in range(n - 1, -1, -1) for b in range(nb - 1, -1, -1)]
        queued = [True] * (n * nb)
        inf = self.inf
        while stack:
            v, b = stack.pop()
            e = v * nb + b
            queued[e] = False
            cur = r[e]
            if cur == inf:
                continue
            inc = self.min_increase(v, b, self.next_value(r, v, b))
            if inc > cur:
                r[e] = inc
                lifts += 1
                if lifts > bound:
                    raise AssertionError("lift count exceeded the termination bound")
                for u in pred[v]:
                    for b0 in back[u][b]:
                        e0 = u * nb + b0
                        if not queued[e0] and r[e0] != inf:
                            queued[e0] = True
                            stack.append((u, b0))
        return Ranking(r, nb, inf, lifts)

    def strategy(self, rank: Ranking) -> Strategy:
        g = self.gg.game
        nb = self.nb
        choice = {}
        starts = set()
        for v in range(self.n):
            for b in range(nb):
                if not rank.finite(v, b):
                    continue
                starts.add((v, b))
                if g.owner[v] == 0:
                    b2 = self.nxt[v][b]
                    choice[(v, b)] = min(g.succ[v], key=lambda w: rank.values[w * nb + b2])
        return Strategy(self.wfs, choice, frozenset(starts))

    def is_good(self, rank: Ranking) -> bool:
        return all(
            self.rank_greater(v, b, rank(v, b), self.next_value(rank.values, v, b))
            for v in range(self.n)
            for b in range(self.nb)
            if rank.finite(v, b)
        )


@dataclass
class RankingResult:
    winning: frozenset[int]
    ranking: Ranking
    strategy: Strategy
    solver: RankingSolver = field(repr=False)


def solve_ranking(gg: GrpGame, *, budget: int = 10**9) -> RankingResult:
    """Winning region, least good ranking and a memory-``B`` strategy."""
    solver = RankingSolver(gg, budget=budget)
    rank = solver.solve()
    win = frozenset(v for v in range(gg.n) if any(rank.finite(v, b) for b in range(solver.nb)))
    return RankingResult(win, rank, solver.strategy(rank), solver)


# ---------------------------------------------------------------- verification


def _violates_all(comp: set, member_pairs) -> bool:
    for fin, infs in member_pairs:
        if comp.isdisjoint(fin) and all(not comp.isdisjoint(s) for s in infs):
            return False
    return True


def _has_bad_cycle(nodes: set, succ, member_pairs) -> bool:
    """Is there a strongly connected node set violating every pair?"""
    for comp in sccs(sorted(nodes), succ):
        if not is_nontrivial(comp, succ):
            continue
        cset = set(comp)
        good = None
        for fin, infs in member_pairs:
            if cset.isdisjoint(fin) and all(not cset.isdisjoint(s) for s in infs):
                good = infs
                break
        if good is None:
            return True
        for s in good:
            if _has_bad_cycle(cset - s, succ, member_pairs):
                return True
    return False


def _memory_graph(gg: GrpGame, wfs, choice):
    cond = gg.condition
    windex = {wf: i for i, wf in enumerate(wfs)}
    g = gg.game
    nxt = [[windex[next_wf(cond, v, wf)] for wf in wfs] for v in range(g.n)]

    def succ(node):
        v, b = node
        b2 = nxt[v][b]
        if g.owner[v] == 0:
            c = choice.get(node)
            return () if c is None else ((c, b2),)
        return tuple((w, b2) for w in g.succ[v])

    pairs = []
    for p in cond.pairs:
        fin = {(v, b) for v in p.fin for b in range(len(wfs))}
        infs = [{(v, b) for v in s for b in range(len(wfs))} for s in p.inf]
        pairs.append((fin, infs))
    return succ, pairs


def verify_strategy(gg: GrpGame, s: Strategy, starts: Iterable[tuple[int, int]] | None = None) -> bool:
    """Check that no play consistent with ``s`` from its start entries is lost."""
    g = gg.game
    succ, pairs = _memory_graph(gg, s.wfs, s.choice)
    todo = list(s.starts if starts is None else starts)
    seen = set(todo)
    while todo:
        node = todo.pop()
        v, _ = node
        if g.owner[v] == 0:
            c = s.choice.get(node)
            if c is None or c not in g.succ[v]:
                return False
        for m in succ(node):
            if m not in seen:
                seen.add(m)
                todo.append(m)
    return not _has_bad_cycle(seen, succ, pairs)


def enumerate_memory_strategies(gg: GrpGame, start: tuple[int, int], limit: int) -> Iterator[dict]:
    """All memory-``B`` choice maps on the part reachable from ``start``."""
    g = gg.game
    wfs = waiting_vectors(gg.condition)
    windex = {wf: i for i, wf in enumerate(wfs)}
    nxt = [[windex[next_wf(gg.condition, v, wf)] for wf in wfs] for v in range(g.n)]
    count = 0

    def rec(choice):
        nonlocal count
        seen = {start}
        todo = [start]
        open_node = None
        while todo:
            node = todo.pop()
            v, b = node
            b2 = nxt[v][b]
            if g.owner[v] == 0:
                c = choice.get(node)
                if c is None:
                    if len(g.succ[v]) == 1:
                        c = choice[node] = g.succ[v][0]
                    else:
                        if open_node is None or node < open_node:
                            open_node = node
                        continue
                nexts = [(c, b2)]
            else:
                nexts = [(w, b2) for w in g.succ[v]]
            for m in nexts:
                if m not in seen:
                    seen.add(m)
                    todo.append(m)
        if open_node is None:
            count += 1
            if count > limit:
                raise ResourceLimitError(f"more than {limit} memory strategies")
            yield dict(choice)
            return
        for w in g.succ[open_node[0]]:
            yield from rec({**choice, open_node: w})

    yield from rec({})


def player0_can_win(gg: GrpGame, v: int, *, limit: int = 100_000) -> bool:
    """Exhaustive search for a winning memory-``B`` strategy from ``v``."""
    wfs = waiting_vectors(gg.condition)
    for b in range(len(wfs)):
        for choice in enumerate_memory_strategies(gg, (v, b), limit):
            if verify_strategy(gg, Strategy(wfs, choice, frozenset()), [(v, b)]):
                return True
    return False


# ---------------------------------------------------------------- symbolic


def solve_symbolic(gg: GrpGame) -> frozenset[int]:
    """Winning region from the nested fixpoint formula, over bitset vertex sets.

    ``cpre(S)``: player-0 vertices with some successor in ``S`` and player-1
    vertices with all successors in ``S``.  The per-``j`` least fixpoints are
    intersected over all ``j`` before updating the greatest fixpoint.
    """
    g = gg.game
    n = g.n
    full = (1 << n) - 1
    smask = [sum(1 << w for w in set(ws)) for ws in g.succ]
    p0 = [v for v in range(n) if g.owner[v] == 0]
    p1 = [v for v in range(n) if g.owner[v] == 1]

    def cpre(s: int) -> int:
        out = 0
        for v in p0:
            if smask[v] & s:
                out |= 1 << v
        for v in p1:
            if smask[v] & ~s == 0:
                out |= 1 << v
        return out

    pairs = [(sum(1 << v for v in p.fin), [sum(1 << v for v in s) for s in p.inf]) for p in gg.condition.pairs]

    def gr(remaining: tuple[int, ...], inv: int, ok: int) -> int:
        win = 0
        for i in remaining:
            fin, infs = pairs[i]
            rest = tuple(x for x in remaining if x != i)
            safe = inv & ~fin
            y = full
            while True:
                conj = full
                py = cpre(y)
                for ij in infs:
                    x = 0
                    while True:
                        new_ok = ok | (safe & ij & py) | (safe & cpre(x))
                        nx = gr(rest, safe, new_ok) if rest else new_ok
                        if nx == x:
                            break
                        x = nx
                    conj &= x
                if conj == y:
                    break
                y = conj
            win |= y
        return win

    z = 0
    order = tuple(range(len(pairs)))
    while True:
        nz = gr(order, full, cpre(z))
        if nz == z:
            break
        z = nz
    return frozenset(v for v in range(n) if z >> v & 1)


# ---------------------------------------------------------------- LTL games


@dataclass
class LtlGameResult:
    winner: int
    product: GrpGame
    automaton: Automaton
    strategy: Strategy | None
    winning: frozenset[int]


def solve_ltl_game(
    g: Game, f: Formula | str, *, solver: str = "ranking", budget: int = 10**9
) -> LtlGameResult:
    """Solve the game with winning condition ``f`` for player 0.

    ``solver`` is ``ranking``, ``symbolic`` or ``both`` (which insists on
    agreement).  The winner refers to the initial product vertex.
    """
    if isinstance(f, str):
        f = parse(f)
    aut = build_dgrw(canonicalize(f))
    gg = game_product(g, aut)
    strategy = None
    if solver in ("ranking", "both"):
        res = solve_ranking(gg, budget=budget)
        win = res.winning
        strategy = res.strategy
        if solver == "both" and solve_symbolic(gg) != win:
            raise AssertionError("ranking and symbolic solvers disagree")
    elif solver == "symbolic":
        win = solve_symbolic(gg)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return LtlGameResult(0 if gg.game.init in win else 1, gg, aut, strategy, win)


def format_strategy(s: Strategy) -> str:
    lines = [f"memory: {s.memory}"]
    for (v, b), w in sorted(s.choice.items()):
        lines.append(f"choice {v} ({','.join(map(str, s.wfs[b]))}) -> {w}")
    return "\n".join(lines) + "\n"
