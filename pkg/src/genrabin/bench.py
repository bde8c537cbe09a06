"""Benchmark generators and the CSV results emitter.

Generators are deterministic in their seed.  The suites pair every formula
with one or more models and run both the generalized pipeline and the
degeneralized (plain Rabin) pipeline, refusing to emit a row unless the two
agree.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .automata import GrpCondition, GrpPair, ResourceLimitError, build_dgrw, degeneralize
from .games import Game, GrpGame, game_product, solve_ranking, solve_symbolic
from .ltl import Formula, always, atom, canonicalize, conj, disj, eventually, neg_atom, negate, parse
from .mdp import Mdp, model_check_detailed

__all__ = [
    "FAIRNESS_ATOMS",
    "TABLE1",
    "TABLE2",
    "ARENA_AP",
    "BenchRow",
    "SuiteDisagreement",
    "gen_fairness",
    "appendix_arena_edges",
    "gen_appendix_arena",
    "gen_random_mdp",
    "gen_random_game",
    "gen_random_grp_game",
    "random_formula",
    "run_suite",
    "write_csv",
]

FAIRNESS_ATOMS = "abcdefgh"

# Table-1 style formulas over plain atoms.  Complementary model predicates
# (such as "p = 0" and "p != 0") become one atom and its negation.
# Entries: (name, text, mode, |B| printed in the source table).
TABLE1: list[tuple[str, str, str, int]] = [
    ("gf3", "G F a & G F b & G F c", "max", 3),
    ("gf4", "G F a & G F b & G F c & G F d", "max", 4),
    ("gf4-min", "G F a & G F b & G F c & G F d", "min", 1),
    ("chain2", "(G F a | F G !b) & (G F b | F G !c)", "max", 2),
    ("self2", "(G F a | F G !a) & (G F b | F G !b)", "max", 2),
    ("cycle3", "(G F a | F G !b) & (G F b | F G !c) & (G F c | F G !a)", "max", 24),
    ("self3", "(G F a | F G !a) & (G F b | F G !b) & (G F c | F G !c)", "max", 24),
    ("mixed-min", "(G F !t | G F a | F G e) & G F !a & G F e", "min", 1),
    ("safety", "(G !x | G !y | G !z) & (F G !e | G F f | G F g) & (F G !f | G F e | G F g)", "max", 8),
    ("disj-min", "(F G !a | F G !b | G F c) | (F G !d & G F e & G F f)", "min", 12),
]

TABLE2: list[tuple[str, str, int]] = [
    ("formula1", "(G F a & G F b & G F c) | (G F !a & G F !b & G F !c)", 9),
    ("formula2", "(G F a | F G b) & (G F c | G F !a) & (G F c | G F !b)", 6),
]


def gen_fairness(n: int) -> Formula:
    """Conjunction of ``n`` constraints ``F G x | G F y`` over fresh atoms."""
    if not 1 <= n <= 4:
        raise ValueError(f"fairness family is defined for 1 <= n <= 4, got {n}")
    parts = []
    for i in range(n):
        x, y = FAIRNESS_ATOMS[2 * i], FAIRNESS_ATOMS[2 * i + 1]
        parts.append(disj(eventually(always(atom(x))), always(eventually(atom(y)))))
    return canonicalize(conj(*parts))


# ---------------------------------------------------------------- arenas

ARENA_AP = ("a", "b", "c")
_ALL = [frozenset(a for i, a in enumerate(ARENA_AP) if m >> i & 1) for m in range(8)]


def _letters(*only: str, but: Sequence[str] = ()) -> frozenset[frozenset[str]]:
    if only:
        return frozenset(frozenset(x) for x in only)
    excluded = {frozenset(x) for x in but}
    return frozenset(s for s in _ALL if s not in excluded)


def appendix_arena_edges(copies: int):
    """Edge-labelled arena: ``(names, owners, edges)`` with ``edges`` as
    ``(source, target, letter set)``.

    Each copy has a player-0 circle and two player-1 squares.  Square exits
    lead to the circle of the next copy; the last copy's squares return to
    their own circle.
    """
    if copies not in (1, 2, 3):
        raise ValueError("copies must be 1, 2 or 3")
    names, owners, edges = [], [], []
    for i in range(copies):
        c, u, lo = 3 * i, 3 * i + 1, 3 * i + 2
        nxt = 3 * (i + 1) if i + 1 < copies else c
        names += [f"circle{i + 1}", f"upper{i + 1}", f"lower{i + 1}"]
        owners += [0, 1, 1]
        edges += [
            (c, c, _letters(but=("a", "b"))),
            (c, u, _letters("a")),
            (c, lo, _letters("b")),
            (u, u, _letters("b")),
            (u, nxt, _letters(but=("b",))),
            (lo, lo, _letters("c")),
            (lo, nxt, _letters(but=("c",))),
        ]
    return names, owners, edges


def gen_appendix_arena(copies: int) -> Game:
    """Vertex-labelled encoding of the edge-labelled arena.

    A vertex ``(S, l)`` means "now at arena vertex ``S``, having arrived
    via letter ``l``"; it carries label ``l`` and the owner of ``S``.  The
    play starts at the first circle with the empty letter.
    """
    names, owners, edges = appendix_arena_edges(copies)
    out: dict[int, list[tuple[int, frozenset[str]]]] = {}
    for s, t, letters in edges:
        out.setdefault(s, []).extend((t, ltr) for ltr in sorted(letters, key=lambda x: sorted(x)))
    start = (0, frozenset())
    verts = [start]
    index = {start: 0}
    succ: list[tuple[int, ...]] = []
    i = 0
    while i < len(verts):
        s, _ = verts[i]
        row = []
        for t in out[s]:
            j = index.get(t)
            if j is None:
                j = index[t] = len(verts)
                verts.append(t)
            row.append(j)
        succ.append(tuple(row))
        i += 1
    labels = [ltr for _, ltr in verts]
    vnames = [f"{names[s]}/{{{','.join(sorted(ltr))}}}" for s, ltr in verts]
    g = Game(succ, [owners[s] for s, _ in verts], labels, 0, vnames)
    g.arena_vertices = len(names)  # type: ignore[attr-defined]
    return g


# ---------------------------------------------------------------- random models


def _denominator_split(rng: random.Random, parts: int) -> tuple[Fraction, ...]:
    d = rng.randint(max(parts, 2), 8)
    cuts = sorted(rng.sample(range(1, d), parts - 1))
    bounds = [0, *cuts, d]
    return tuple(Fraction(bounds[i + 1] - bounds[i], d) for i in range(parts))


def _random_graph(rng: random.Random, n: int, branch: int) -> list[list[int]]:
    succ: list[list[int]] = []
    for v in range(n):
        k = rng.randint(1, min(branch, n))
        succ.append(sorted(rng.sample(range(n), k)))
    # a random spanning tree from vertex 0 makes everything reachable
    for v in range(1, n):
        u = rng.randrange(v)
        if v not in succ[u]:
            succ[u] = sorted([*succ[u], v])
    return succ


def _random_labels(rng: random.Random, n: int, atoms: Sequence[str]) -> list[frozenset[str]]:
    return [frozenset(a for a in atoms if rng.random() < 0.5) for _ in range(n)]


def gen_random_mdp(
    seed: int,
    n_vertices: int = 6,
    n_atoms: int = 2,
    branch: int = 2,
    *,
    player0_ratio: float = 0.3,
    atoms: Sequence[str] | None = None,
) -> Mdp:
    """Random MDP: rational probabilities with denominators at most 8.

    Labels range over the first ``n_atoms`` letters unless ``atoms`` names
    them explicitly.
    """
    if not 1 <= n_vertices or not 0 <= n_atoms <= 26 or branch < 1:
        raise ValueError("parameters out of range")
    rng = random.Random(f"mdp:{seed}:{n_vertices}:{n_atoms}:{branch}")
    succ = _random_graph(rng, n_vertices, branch)
    probs: list[tuple[Fraction, ...] | None] = []
    for v in range(n_vertices):
        if len(succ[v]) > 1 and rng.random() < player0_ratio:
            probs.append(None)
        elif len(succ[v]) > 7:
            probs.append(None)
        else:
            probs.append(_denominator_split(rng, len(succ[v])))
    if atoms is None:
        atoms = [chr(ord("a") + i) for i in range(n_atoms)]
    return Mdp([tuple(s) for s in succ], probs, _random_labels(rng, n_vertices, atoms), 0)


def gen_random_game(seed: int, n_vertices: int = 5, n_atoms: int = 2, branch: int = 2) -> Game:
    rng = random.Random(f"game:{seed}:{n_vertices}:{n_atoms}:{branch}")
    succ = _random_graph(rng, n_vertices, branch)
    owners = [rng.randint(0, 1) for _ in range(n_vertices)]
    atoms = [chr(ord("a") + i) for i in range(n_atoms)]
    return Game([tuple(s) for s in succ], owners, _random_labels(rng, n_vertices, atoms), 0)


def gen_random_grp_game(seed: int, n_vertices: int = 6, k: int = 2, max_width: int = 2) -> GrpGame:
    """Random arena with a random condition of ``k`` pairs over its vertices."""
    rng = random.Random(f"grp:{seed}:{n_vertices}:{k}:{max_width}")
    succ = _random_graph(rng, n_vertices, 2)
    owners = [rng.randint(0, 1) for _ in range(n_vertices)]
    g = Game([tuple(s) for s in succ], owners, [frozenset()] * n_vertices, 0)

    def subset(p: float) -> frozenset[int]:
        return frozenset(v for v in range(n_vertices) if rng.random() < p)

    pairs = tuple(
        GrpPair(subset(0.2), tuple(subset(0.4) for _ in range(rng.randint(1, max_width)))) for _ in range(k)
    )
    return GrpGame(g, GrpCondition(pairs))


def random_formula(rng: random.Random, atoms: Sequence[str], depth: int) -> Formula:
    """Random LTL(F,G) formula with operator nesting at most ``depth``."""
    if depth == 0 or rng.random() < 0.2:
        a = rng.choice(list(atoms))
        return atom(a) if rng.random() < 0.6 else neg_atom(a)
    op = rng.choice("&|FGFG")
    if op == "F":
        return eventually(random_formula(rng, atoms, depth - 1))
    if op == "G":
        return always(random_formula(rng, atoms, depth - 1))
    a, b = random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)
    return conj(a, b) if op == "&" else disj(a, b)


# ---------------------------------------------------------------- suites


@dataclass
class BenchRow:
    formula: str
    model: str
    dgrw_states: int
    k: int
    B: int
    drw_states: int | None
    product_gr: int
    product_r: int | None
    result: str
    t_translate_ms: float | None = None
    t_solve_ms: float | None = None


COLUMNS = [f.name for f in fields(BenchRow)]


class SuiteDisagreement(AssertionError):
    """The generalized and degeneralized pipelines produced different results."""


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 1)


def _drw_or_none(aut, limit: int):
    try:
        return degeneralize(aut, max_states=limit)
    except ResourceLimitError:
        return None


def _mc_row(f: Formula, mode: str, name: str, m: Mdp, drw_limit: int) -> BenchRow:
    # a min query is answered through the negation, so report that automaton
    t0 = time.perf_counter()
    aut = build_dgrw(f if mode == "max" else negate(f))
    drw = _drw_or_none(aut, drw_limit)
    t_tr = _ms(t0)
    t0 = time.perf_counter()
    gr = model_check_detailed(m, f, mode)
    r = model_check_detailed(m, f, mode, via="drw") if drw is not None else None
    t_solve = _ms(t0)
    if r is not None and r.value != gr.value:
        raise SuiteDisagreement(f"{f} on {name}: generalized {gr.value} vs Rabin {r.value}")
    return BenchRow(
        str(f) if mode == "max" else f"min: {f}",
        name,
        aut.n_states,
        len(aut.condition.pairs),
        aut.condition.index,
        drw.n_states if drw is not None else None,
        gr.product_states,
        r.product_states if r is not None else None,
        str(gr.value),
        t_tr,
        t_solve,
    )


def _game_row(f: Formula, name: str, g: Game, budget: int, drw_limit: int) -> BenchRow:
    t0 = time.perf_counter()
    aut = build_dgrw(f)
    drw = _drw_or_none(aut, drw_limit)
    t_tr = _ms(t0)
    t0 = time.perf_counter()
    gg = game_product(g, aut)
    try:
        win = solve_ranking(gg, budget=budget).winning
    except ResourceLimitError:
        win = None
    sym = solve_symbolic(gg)
    if win is not None and win != sym:
        raise SuiteDisagreement(f"{f} on {name}: ranking and symbolic solvers disagree")
    gr_winner = 0 if gg.game.init in sym else 1
    pr = None
    if drw is not None:
        rg = game_product(g, drw)
        pr = rg.n
        r_winner = 0 if rg.game.init in solve_symbolic(rg) else 1
        if r_winner != gr_winner:
            raise SuiteDisagreement(f"{f} on {name}: generalized and Rabin products disagree")
    t_solve = _ms(t0)
    return BenchRow(
        str(f),
        name,
        aut.n_states,
        len(aut.condition.pairs),
        aut.condition.index,
        drw.n_states if drw is not None else None,
        gg.n,
        pr,
        f"player{gr_winner}",
        t_tr,
        t_solve,
    )


def _fairness_rows(budget: int, drw_limit: int) -> Iterable[BenchRow]:
    m = gen_random_mdp(1, 8, len(FAIRNESS_ATOMS), 2)
    for n in range(1, 5):
        yield _mc_row(gen_fairness(n), "max", "random-mdp-1", m, drw_limit)


def _appendix_rows(budget: int, drw_limit: int) -> Iterable[BenchRow]:
    for _, text, _ in TABLE2:
        f = canonicalize(parse(text))
        for copies in (1, 2, 3):
            yield _game_row(f, f"arena{copies}", gen_appendix_arena(copies), budget, drw_limit)


def _random_rows(budget: int, drw_limit: int) -> Iterable[BenchRow]:
    for name, text, mode, _ in TABLE1:
        f = canonicalize(parse(text))
        atoms = sorted({a for a in text if a.isalpha() and a not in "FG"})
        for seed in (1, 2):
            m = gen_random_mdp(seed, 8, len(atoms), 2, atoms=atoms)
            yield _mc_row(f, mode, f"random-mdp-{seed}", m, drw_limit)


SUITES: dict[str, Callable[[int, int], Iterable[BenchRow]]] = {
    "fairness": _fairness_rows,
    "appendixB": _appendix_rows,
    "random": _random_rows,
}


def run_suite(
    suite: str,
    out: str | None = None,
    *,
    times: bool = True,
    budget: int = 5_000_000,
    drw_limit: int = 200_000,
    progress: Callable[[BenchRow], None] | None = None,
) -> list[BenchRow]:
    """Run a suite and optionally write its CSV to ``out``.

    Rows are produced in suite-definition order.  ``budget`` bounds the
    ranking domain; beyond it only the fixpoint solver is used.  DRW columns
    are left empty when degeneralization exceeds ``drw_limit`` states.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    rows = []
    for row in SUITES[suite](budget, drw_limit):
        if not times:
            row.t_translate_ms = row.t_solve_ms = None
        rows.append(row)
        if progress is not None:
            progress(row)
    if out is not None:
        with open(out, "w", newline="") as fh:
            fh.write(write_csv(rows))
    return rows


def write_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow(["" if v is None else v for v in asdict(row).values()])
    return buf.getvalue()
