"""Markov decision processes and quantitative model checking of LTL(F,G).

Pipeline: build a deterministic automaton for the formula, take the product
with the MDP, collect the maximal end components that satisfy some pair of
the lifted acceptance condition, then maximize the probability of reaching
their union.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from ._text import FormatError, id_list, int_of, lines_of, vertex_of
from .automata import Automaton, GrpCondition, GrpPair, build_dgrw, degeneralize
from .graphs import is_nontrivial, reachable, sccs
from .ltl import Formula, canonicalize, negate, parse

__all__ = [
    "Mdp",
    "MdpError",
    "ProductMdp",
    "McResult",
    "parse_mdp",
    "format_mdp",
    "product",
    "mec_decomposition",
    "is_end_component",
    "winning_union",
    "max_reach",
    "model_check",
    "model_check_detailed",
    "solve_linear_exact",
]


class MdpError(FormatError):
    """Invalid MDP text or structure."""


@dataclass
class Mdp:
    """An MDP with player-0 (nondeterministic) and probabilistic vertices.

    ``succ[v]`` lists successors; for a probabilistic ``v``, ``probs[v]`` is
    aligned with ``succ[v]``.  ``probs[v]`` is ``None`` for player-0 vertices.
    """

    succ: list[tuple[int, ...]]
    probs: list[tuple[Fraction, ...] | None]
    labels: list[frozenset[str]]
    init: int = 0

    def __post_init__(self):
        n = len(self.succ)
        if len(self.probs) != n or len(self.labels) != n:
            raise MdpError("succ, probs and labels must have equal length")
        if not 0 <= self.init < n:
            raise MdpError("initial vertex out of range")
        for v in range(n):
            if not self.succ[v]:
                raise MdpError(f"vertex {v} has no outgoing edge")
            if len(set(self.succ[v])) != len(self.succ[v]):
                raise MdpError(f"vertex {v} has a repeated successor")
            if any(not 0 <= w < n for w in self.succ[v]):
                raise MdpError(f"dangling vertex id among successors of {v}")
            p = self.probs[v]
            if p is not None:
                if len(p) != len(self.succ[v]) or any(x <= 0 for x in p):
                    raise MdpError(f"edge/distribution mismatch at vertex {v}")
                if sum(p, Fraction(0)) != 1:
                    raise MdpError(f"distribution does not sum to 1 at vertex {v}")

    @property
    def n(self) -> int:
        return len(self.succ)

    def is_prob(self, v: int) -> bool:
        return self.probs[v] is not None

    @property
    def player0(self) -> list[int]:
        return [v for v in range(self.n) if self.probs[v] is None]

    def reachable(self) -> set[int]:
        return reachable([self.init], lambda v: self.succ[v])


def parse_mdp(text: str) -> Mdp:
    """Read the ``mdp`` text format (see the README for the grammar)."""
    it = lines_of(text)
    first = next(it, None)
    if first is None or first[1] != "mdp":
        raise MdpError("missing 'mdp' header", first[0] if first else 0)
    n = init = None
    owners: set[int] = set()
    p0: list[int] = []
    pr: list[int] = []
    labels: dict[int, frozenset[str]] = {}
    edges: dict[int, list[int]] = {}
    dist: dict[int, dict[int, Fraction]] = {}
    for lineno, line in it:
        head, _, rest = line.partition(" ")
        try:
            if head == "states:":
                n = int_of(rest.strip(), lineno)
                if n <= 0:
                    raise MdpError("need at least one state", lineno)
            elif head == "init:":
                init = vertex_of(rest.strip(), n, lineno)
            elif head == "player0:":
                p0 += id_list(rest, n, lineno, owners)
            elif head == "prob:":
                pr += id_list(rest, n, lineno, owners)
            elif head == "label":
                vid, _, names = rest.partition(":")
                v = vertex_of(vid.strip(), n, lineno)
                if v in labels:
                    raise MdpError(f"duplicate label for vertex {v}", lineno)
                labels[v] = frozenset(names.split())
            elif head == "edge":
                toks = rest.split()
                if len(toks) != 2:
                    raise MdpError("edge needs two vertex ids", lineno)
                u, w = (vertex_of(t, n, lineno) for t in toks)
                if w in edges.setdefault(u, []):
                    raise MdpError(f"duplicate edge {u} {w}", lineno)
                edges[u].append(w)
            elif head == "pedge":
                toks = rest.split()
                if len(toks) != 3:
                    raise MdpError("pedge needs two vertex ids and a probability", lineno)
                u, w = (vertex_of(t, n, lineno) for t in toks[:2])
                try:
                    p = Fraction(toks[2])
                except (ValueError, ZeroDivisionError):
                    raise MdpError(f"bad probability {toks[2]!r}", lineno) from None
                if p <= 0 or p > 1:
                    raise MdpError(f"probability {p} outside (0,1]", lineno)
                if w in dist.setdefault(u, {}):
                    raise MdpError(f"duplicate pedge {u} {w}", lineno)
                dist[u][w] = p
            else:
                raise MdpError(f"unknown directive {head!r}", lineno)
        except FormatError as exc:
            if isinstance(exc, MdpError):
                raise
            raise MdpError(str(exc).split(": ", 1)[-1], exc.lineno) from None
    if n is None or init is None:
        raise MdpError("'states:' and 'init:' are required")
    if len(owners) != n:
        missing = sorted(set(range(n)) - owners)
        raise MdpError(f"vertices {missing} are neither player0 nor prob")
    prob_set = set(pr)
    for u in edges:
        if u in prob_set:
            raise MdpError(f"edge/distribution mismatch: 'edge' from probabilistic vertex {u}")
    for u in dist:
        if u not in prob_set:
            raise MdpError(f"edge/distribution mismatch: 'pedge' from player-0 vertex {u}")
    succ: list[tuple[int, ...]] = []
    probs: list[tuple[Fraction, ...] | None] = []
    for v in range(n):
        if v in prob_set:
            d = dist.get(v, {})
            if not d:
                raise MdpError(f"probabilistic vertex {v} has no distribution")
            ws = tuple(sorted(d))
            succ.append(ws)
            probs.append(tuple(d[w] for w in ws))
        else:
            ws = tuple(edges.get(v, ()))
            if not ws:
                raise MdpError(f"player-0 vertex {v} has no outgoing edge")
            succ.append(ws)
            probs.append(None)
    return Mdp(succ, probs, [labels.get(v, frozenset()) for v in range(n)], init)


def format_mdp(m: Mdp) -> str:
    lines = ["mdp", f"states: {m.n}", f"init: {m.init}"]
    lines.append("player0: " + " ".join(str(v) for v in range(m.n) if not m.is_prob(v)))
    lines.append("prob: " + " ".join(str(v) for v in range(m.n) if m.is_prob(v)))
    for v, lab in enumerate(m.labels):
        if lab:
            lines.append(f"label {v}: {' '.join(sorted(lab))}")
    for v in range(m.n):
        p = m.probs[v]
        if p is None:
            lines += [f"edge {v} {w}" for w in m.succ[v]]
        else:
            lines += [f"pedge {v} {w} {x.numerator}/{x.denominator}" for w, x in zip(m.succ[v], p)]
    return "\n".join(line.rstrip() for line in lines) + "\n"


# ---------------------------------------------------------------- product


@dataclass
class ProductMdp:
    """Product of an MDP with a deterministic automaton.

    Vertex ``i`` stands for ``states[i] = (v, q)`` where ``q`` is the
    automaton state after reading the labels up to and including ``v``.
    """

    mdp: Mdp
    condition: GrpCondition
    states: list[tuple[int, int]]
    model: Mdp = field(repr=False)
    automaton: Automaton = field(repr=False)


def _lift(cond: GrpCondition, qs: Sequence[int]) -> GrpCondition:
    pairs = []
    for p in cond.pairs:
        fin = frozenset(i for i, q in enumerate(qs) if q in p.fin)
        infs = tuple(frozenset(i for i, q in enumerate(qs) if q in s) for s in p.inf)
        pairs.append(GrpPair(fin, infs))
    return GrpCondition(tuple(pairs))


def product(m: Mdp, aut: Automaton) -> ProductMdp:
    """Reachable product; each step reads the label of the vertex being entered."""
    amask = [aut.letter_mask(lab) for lab in m.labels]
    start = (m.init, aut.delta[aut.initial][amask[m.init]])
    states = [start]
    index = {start: 0}
    succ: list[tuple[int, ...]] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        v, q = states[i]
        row = []
        for w in m.succ[v]:
            t = (w, aut.delta[q][amask[w]])
            j = index.get(t)
            if j is None:
                j = index[t] = len(states)
                states.append(t)
                queue.append(j)
            row.append(j)
        succ.append(tuple(row))
    probs = [m.probs[v] for v, _ in states]
    labels = [m.labels[v] for v, _ in states]
    pm = Mdp(succ, probs, labels, 0)
    return ProductMdp(pm, _lift(aut.condition, [q for _, q in states]), states, m, aut)


# ---------------------------------------------------------------- end components


def mec_decomposition(m: Mdp, allowed: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Maximal end components inside ``allowed`` (default: all vertices).

    Repeatedly splits into SCCs and discards probabilistic vertices with an
    edge leaving their component (and player-0 vertices with no edge staying
    inside) until every component is closed.
    """
    base = set(range(m.n)) if allowed is None else set(allowed)
    out: list[frozenset[int]] = []
    work = [base]
    while work:
        part = work.pop()
        for comp in sccs(sorted(part), lambda v: m.succ[v]):
            cset = set(comp)
            bad = set()
            for u in comp:
                if m.is_prob(u):
                    if any(w not in cset for w in m.succ[u]):
                        bad.add(u)
                elif not any(w in cset for w in m.succ[u]):
                    bad.add(u)
            if not bad:
                if is_nontrivial(comp, lambda v: m.succ[v]):
                    out.append(frozenset(cset))
            elif len(bad) < len(cset):
                work.append(cset - bad)
    out.sort(key=min)
    return out


def is_end_component(m: Mdp, comp: Iterable[int]) -> bool:
    """Strongly connected via edges inside ``comp`` and closed under probabilistic edges."""
    c = set(comp)
    if not c:
        return False
    for u in c:
        if m.is_prob(u):
            if any(w not in c for w in m.succ[u]):
                return False
        elif not any(w in c for w in m.succ[u]):
            return False
    parts = sccs(sorted(c), lambda v: m.succ[v])
    return len(parts) == 1 and is_nontrivial(parts[0], lambda v: m.succ[v])


def _avoid_closure(m: Mdp, removed: Iterable[int]) -> set[int]:
    """Grow ``removed`` until no kept probabilistic vertex can be forced into it."""
    gone = set(removed)
    pred: list[list[int]] = [[] for _ in range(m.n)]
    for u in range(m.n):
        for w in m.succ[u]:
            pred[w].append(u)
    alive_succ = [len(m.succ[u]) for u in range(m.n)]
    todo = list(gone)
    while todo:
        w = todo.pop()
        for u in pred[w]:
            if u in gone:
                continue
            alive_succ[u] -= 1
            if m.is_prob(u) or alive_succ[u] == 0:
                gone.add(u)
                todo.append(u)
    return gone


def winning_union(p: ProductMdp) -> frozenset[int]:
    """Union over all pairs of the MECs avoiding ``F_i`` that meet every ``I_i^j``."""
    m = p.mdp
    win: set[int] = set()
    for pair in p.condition.pairs:
        keep = set(range(m.n)) - _avoid_closure(m, pair.fin)
        for comp in mec_decomposition(m, keep):
            if all(not comp.isdisjoint(s) for s in pair.inf):
                win |= comp
    return frozenset(win)


# ---------------------------------------------------------------- reachability


def solve_linear_exact(
    rows: dict[int, tuple[dict[int, Fraction], Fraction]]
) -> dict[int, Fraction]:
    """Solve ``x_i = sum_j a_ij x_j + b_i`` exactly.

    The system must have a unique solution (for instance, a transient Markov
    chain).  Works SCC by SCC in reverse topological order so each dense
    elimination stays small.
    """
    val: dict[int, Fraction] = {}
    for comp in sccs(sorted(rows), lambda i: rows[i][0].keys()):
        cset = set(comp)
        order = sorted(comp)
        pos = {v: k for k, v in enumerate(order)}
        size = len(order)
        mat = [[Fraction(0)] * (size + 1) for _ in range(size)]
        for r, v in enumerate(order):
            coeffs, const = rows[v]
            mat[r][r] += 1
            rhs = const
            for j, a in coeffs.items():
                if j in cset:
                    mat[r][pos[j]] -= a
                else:
                    rhs += a * val[j]
            mat[r][size] = rhs
        for c in range(size):
            piv = next((r for r in range(c, size) if mat[r][c] != 0), None)
            if piv is None:
                raise ArithmeticError("singular system")
            mat[c], mat[piv] = mat[piv], mat[c]
            inv = 1 / mat[c][c]
            rowc = [x * inv for x in mat[c]]
            mat[c] = rowc
            for r in range(size):
                if r != c and mat[r][c] != 0:
                    f = mat[r][c]
                    mat[r] = [x - f * y for x, y in zip(mat[r], rowc)]
        for r, v in enumerate(order):
            val[v] = mat[r][size]
    return val


def _positive(m: Mdp, target: set[int]) -> set[int]:
    pred: list[list[int]] = [[] for _ in range(m.n)]
    for u in range(m.n):
        for w in m.succ[u]:
            pred[w].append(u)
    return reachable(target, lambda w: pred[w])


def max_reach(
    m: Mdp,
    target: Iterable[int],
    mode: Literal["exact", "iterative"] = "exact",
    epsilon: float = 1e-6,
    max_sweeps: int = 10_000_000,
) -> list:
    """Maximal probability of reaching ``target`` from every vertex.

    ``exact`` returns Fractions (end components of the non-target part are
    collapsed, then strategy improvement with exact linear solves);
    ``iterative`` returns floats from Gauss-Seidel value iteration started
    at zero, stopped once a sweep changes no value by ``epsilon`` or more.
    """
    tgt = set(target)
    pos = _positive(m, tgt)
    rest = sorted(pos - tgt)
    if mode == "iterative":
        x = [0.0] * m.n
        for t in tgt:
            x[t] = 1.0
        fprobs = [None if p is None else [float(a) for a in p] for p in m.probs]
        for _ in range(max_sweeps):
            diff = 0.0
            for v in rest:
                p = fprobs[v]
                if p is None:
                    new = max(x[w] for w in m.succ[v])
                else:
                    new = sum(a * x[w] for a, w in zip(p, m.succ[v]))
                if new - x[v] > diff:
                    diff = new - x[v]
                if new > x[v]:
                    x[v] = new
            if diff < epsilon:
                return x
        raise RuntimeError("value iteration did not converge")
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    return _max_reach_exact(m, tgt, set(rest))


def _max_reach_exact(m: Mdp, tgt: set[int], rest: set[int]) -> list[Fraction]:
    one, zero = Fraction(1), Fraction(0)
    # Collapse end components of the undecided part: inside one, every exit
    # is available from everywhere, and lingering forever is worth 0.
    node_of: dict[int, int] = {v: v for v in rest}
    members: dict[int, list[int]] = {}
    for comp in mec_decomposition(m, rest):
        rep = min(comp)
        members[rep] = sorted(comp)
        for v in comp:
            node_of[v] = rep
    nodes = sorted(set(node_of.values()))

    def const_of(w: int) -> Fraction | None:
        if w in tgt:
            return one
        if w not in node_of:
            return zero
        return None

    # actions[node]: list of successors (original vertex ids); None = stay.
    actions: dict[int, list[int | None]] = {}
    fixed: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
    for u in nodes:
        if u in members:
            exits = []
            for v in members[u]:
                if not m.is_prob(v):
                    exits += [w for w in m.succ[v] if node_of.get(w) != u]
            actions[u] = sorted(set(exits)) + [None]
        elif m.is_prob(u):
            coeffs: dict[int, Fraction] = {}
            const = zero
            for w, a in zip(m.succ[u], m.probs[u]):
                c = const_of(w)
                if c is None:
                    coeffs[node_of[w]] = coeffs.get(node_of[w], zero) + a
                else:
                    const += a * c
            fixed[u] = (coeffs, const)
        else:
            actions[u] = list(m.succ[u])

    def row_for(a: int | None) -> tuple[dict[int, Fraction], Fraction]:
        if a is None:
            return {}, zero
        c = const_of(a)
        if c is not None:
            return {}, c
        return {node_of[a]: one}, zero

    choice = {u: acts[0] for u, acts in actions.items()}
    while True:
        rows = dict(fixed)
        for u, a in choice.items():
            rows[u] = row_for(a)
        val = solve_linear_exact(rows)

        def worth(a):
            if a is None:
                return zero
            c = const_of(a)
            return c if c is not None else val[node_of[a]]

        changed = False
        for u, acts in actions.items():
            cur = worth(choice[u])
            best = max(acts, key=worth)
            if worth(best) > cur:
                choice[u] = best
                changed = True
        if not changed:
            break
    out = [zero] * m.n
    for t in tgt:
        out[t] = one
    for v, u in node_of.items():
        out[v] = val[u]
    return out


# ---------------------------------------------------------------- model checking


@dataclass
class McResult:
    value: Fraction | float
    product_states: int
    automaton_states: int
    pairs: int
    index: int
    winning: int


def model_check_detailed(
    m: Mdp,
    f: Formula | str,
    mode: Literal["max", "min"] = "max",
    *,
    exact: bool = True,
    epsilon: float = 1e-6,
    via: Literal["dgrw", "drw"] = "dgrw",
) -> McResult:
    if isinstance(f, str):
        f = parse(f)
    f = canonicalize(f)
    if mode == "min":
        r = model_check_detailed(m, negate(f), "max", exact=exact, epsilon=epsilon, via=via)
        r.value = 1 - r.value
        return r
    if mode != "max":
        raise ValueError(f"unknown mode {mode!r}")
    aut: Automaton = build_dgrw(f)
    index = aut.condition.index
    if via == "drw":
        aut = degeneralize(aut)
    p = product(m, aut)
    win = winning_union(p)
    vals = max_reach(p.mdp, win, "exact" if exact else "iterative", epsilon)
    return McResult(vals[p.mdp.init], p.mdp.n, aut.n_states, len(aut.condition.pairs), index, len(win))


def model_check(
    m: Mdp,
    f: Formula | str,
    mode: Literal["max", "min"] = "max",
    *,
    exact: bool = True,
    epsilon: float = 1e-6,
    via: Literal["dgrw", "drw"] = "dgrw",
) -> Fraction | float:
    """Extremal probability that a run from the initial vertex satisfies ``f``.

    ``min`` is computed as one minus the maximal probability of the negation.
    """
    return model_check_detailed(m, f, mode, exact=exact, epsilon=epsilon, via=via).value
