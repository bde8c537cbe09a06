"""Deterministic generalized Rabin automata for LTL(F,G).

States pair a progressed formula with the current letter projected onto
the atoms that occur below both an F and a G.  The acceptance condition is
assembled from guesses about which temporal subformulas hold eventually
forever; every guess contributes one generalized Rabin pair.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterable, Sequence

import numpy as np

from .ltl import (
    AND,
    ATOM,
    FALSE,
    FIN,
    GLOB,
    NATOM,
    OR,
    TRUE,
    FF,
    TT,
    Formula,
    LassoWord,
    atoms,
    canonicalize,
    conj,
    disj,
    dnf_terms,
    nested_atoms,
    parse,
)

__all__ = [
    "GrpPair",
    "GrpCondition",
    "Automaton",
    "DgrwAutomaton",
    "RabinAutomaton",
    "ResourceLimitError",
    "AutomatonFormatError",
    "progress",
    "build_dgrw",
    "degeneralize",
    "degeneralization_index",
    "accepts_lasso",
    "check_equiv_bounded",
    "format_letter",
    "parse_letter",
    "write_automaton",
    "read_automaton",
]


class ResourceLimitError(RuntimeError):
    """A configured size guard was exceeded."""


class AutomatonFormatError(ValueError):
    pass


# ---------------------------------------------------------------- conditions


@dataclass(frozen=True)
class GrpPair:
    """One generalized Rabin pair: avoid ``fin`` eventually, hit every ``inf`` set forever."""

    fin: frozenset[int]
    inf: tuple[frozenset[int], ...]

    def __post_init__(self):
        if not self.inf:
            raise ValueError("a pair needs at least one Buchi set")

    @property
    def width(self) -> int:
        return len(self.inf)

    def holds(self, visited: frozenset[int] | set[int]) -> bool:
        return self.fin.isdisjoint(visited) and all(not s.isdisjoint(visited) for s in self.inf)


@dataclass(frozen=True)
class GrpCondition:
    pairs: tuple[GrpPair, ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("a condition needs at least one pair")

    def holds(self, visited: Iterable[int]) -> bool:
        vs = frozenset(visited)
        return any(p.holds(vs) for p in self.pairs)

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(p.width for p in self.pairs)

    @property
    def index(self) -> int:
        return math.prod(self.widths)


def degeneralization_index(cond: GrpCondition) -> int:
    """``|B|``: the product of the Buchi-set counts over all pairs."""
    return cond.index


# ---------------------------------------------------------------- automata


@dataclass
class Automaton:
    """A complete deterministic automaton over ``2^alphabet``.

    ``delta[q][m]`` is the successor of ``q`` on the letter whose bitmask is
    ``m`` (bit ``i`` set iff ``alphabet[i]`` holds).
    """

    alphabet: tuple[str, ...]
    delta: list[list[int]]
    initial: int
    condition: GrpCondition
    labels: list = field(default_factory=list)
    kind: str = "grp"

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def letter_mask(self, letter: Iterable[str]) -> int:
        letter = set(letter)
        return sum(1 << i for i, a in enumerate(self.alphabet) if a in letter)

    def step(self, q: int, letter: Iterable[str]) -> int:
        return self.delta[q][self.letter_mask(letter)]

    def run(self, word: Sequence[Iterable[str]], q: int | None = None) -> int:
        q = self.initial if q is None else q
        for x in word:
            q = self.step(q, x)
        return q

    def accepts(self, w: LassoWord) -> bool:
        return accepts_lasso(self, w)


@dataclass
class DgrwAutomaton(Automaton):
    formula: Formula = TT
    kind: str = "dgrw"


@dataclass
class RabinAutomaton(Automaton):
    """Degeneralized automaton; every pair of ``condition`` has one Buchi set."""

    source: Automaton | None = None
    kind: str = "drw"

    @property
    def rabin_pairs(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        return [(p.fin, p.inf[0]) for p in self.condition.pairs]


def _inf_states(aut: Automaton, w: LassoWord) -> set[int]:
    q = aut.initial
    for x in w.prefix:
        q = aut.step(q, x)
    starts: dict[int, int] = {}
    trail: list[list[int]] = []
    while q not in starts:
        starts[q] = len(trail)
        seg = []
        for x in w.cycle:
            seg.append(q)
            q = aut.step(q, x)
        trail.append(seg)
    out: set[int] = set()
    for seg in trail[starts[q] :]:
        out.update(seg)
    return out


def accepts_lasso(aut: Automaton, w: LassoWord) -> bool:
    """Run ``aut`` on the lasso and test the states visited infinitely often."""
    return aut.condition.holds(_inf_states(aut, w))


# ---------------------------------------------------------------- progression


def _af(f: Formula, letter: frozenset[str]) -> Formula:
    k = f.kind
    if k in (TRUE, FALSE):
        return f
    if k == ATOM:
        return TT if f.name in letter else FF
    if k == NATOM:
        return FF if f.name in letter else TT
    if k == AND:
        return conj(*(_af(a, letter) for a in f.args))
    if k == OR:
        return disj(*(_af(a, letter) for a in f.args))
    if k == FIN:
        return disj(_af(f.args[0], letter), f)
    return conj(_af(f.args[0], letter), f)


@lru_cache(maxsize=None)
def _progress(f: Formula, letter: frozenset[str]) -> Formula:
    return canonicalize(_af(f, letter))


def progress(f: Formula, letter: Iterable[str]) -> Formula:
    """One-step unfolding of ``f`` by the letter, canonicalized."""
    f = canonicalize(f)
    return _progress(f, frozenset(letter) & atoms(f))


# ---------------------------------------------------------------- construction


def _lex_order(n: int, alphabet: Sequence[str]) -> list[int]:
    return sorted(range(1 << n), key=lambda m: tuple(a for i, a in enumerate(alphabet) if m >> i & 1))


def build_dgrw(
    f: Formula | str, *, max_atoms: int = 10, max_states: int = 100_000, max_guess: int = 22
) -> DgrwAutomaton:
    """Translate an LTL(F,G) formula into a deterministic generalized Rabin automaton.

    States are explored breadth-first from ``(f, {})`` with letters taken in
    lexicographic order, so state ids are deterministic.
    """
    if isinstance(f, str):
        f = parse(f)
    f = canonicalize(f)
    alphabet = tuple(sorted(atoms(f)))
    n = len(alphabet)
    if n > max_atoms:
        raise ResourceLimitError(f"{n} atoms exceed the alphabet guard of {max_atoms}")
    nested = nested_atoms(f)
    letter_sets = [frozenset(a for i, a in enumerate(alphabet) if m >> i & 1) for m in range(1 << n)]
    nmask = sum(1 << i for i, a in enumerate(alphabet) if a in nested)
    order = _lex_order(n, alphabet)

    labels: list[tuple[Formula, frozenset[str]]] = [(f, frozenset())]
    index = {labels[0]: 0}
    delta: list[list[int]] = []
    queue = deque([0])
    while queue:
        q = queue.popleft()
        chi = labels[q][0]
        row = [0] * (1 << n)
        for m in order:
            target = (progress(chi, letter_sets[m]), letter_sets[m & nmask])
            t = index.get(target)
            if t is None:
                t = index[target] = len(labels)
                if t >= max_states:
                    raise ResourceLimitError(f"more than {max_states} automaton states")
                labels.append(target)
                queue.append(t)
            row[m] = t
        delta.append(row)

    cond = _guess_condition(labels, nested, max_guess)
    return DgrwAutomaton(alphabet, delta, 0, cond, labels, formula=f)


def _lits_hold(lits: Iterable[Formula], lam: frozenset[str]) -> bool:
    return all((x.name in lam) == (x.kind == ATOM) for x in lits)


def _guess_condition(
    labels: list[tuple[Formula, frozenset[str]]], nested: frozenset[str], max_guess: int
) -> GrpCondition:
    n = len(labels)
    full = (1 << n) - 1

    by_chi: dict[Formula, int] = {}
    by_lam: dict[frozenset[str], int] = {}
    for q, (chi, lam) in enumerate(labels):
        by_chi[chi] = by_chi.get(chi, 0) | 1 << q
        by_lam[lam] = by_lam.get(lam, 0) | 1 << q

    # Temporal elements whose bodies mention only nested atoms are guessed
    # and checked on the letter component.  The others are resolved by
    # progression.  An unguessed F can only sit below other Fs, so in the
    # limit its literals are false.  An unguessed G can only sit below other
    # Gs; its body must hold at every late position, so its literals are
    # read from the state's letter (atoms missing from the letter are
    # checked by progression and count as true).
    def guessed(t: Formula) -> bool:
        return atoms(t.args[0]) <= nested

    guess: list[Formula] = []
    seen: set[Formula] = set()
    stack = [e for chi in by_chi for term in dnf_terms(chi) for e in term]
    while stack:
        t = stack.pop()
        if not t.is_temporal or t in seen:
            continue
        seen.add(t)
        if guessed(t):
            guess.append(t)
        stack.extend(e for term in dnf_terms(t.args[0]) for e in term)
    guess.sort(key=lambda t: t.key)
    if len(guess) > max_guess:
        raise ResourceLimitError(f"{len(guess)} guessed subformulas exceed the guard of {max_guess}")
    bit = {t: 1 << i for i, t in enumerate(guess)}
    limit_memo: dict[tuple[Formula, frozenset[str]], list[int]] = {}

    def limit_value(t: Formula, lam: frozenset[str]) -> list[int]:
        # monotone DNF over guess bits, as a list of minimal masks
        if t in bit:
            return [bit[t]]
        got = limit_memo.get((t, lam))
        if got is None:
            got = limit_memo[(t, lam)] = _terms_value(dnf_terms(t.args[0]), lam, t.kind == GLOB)
        return got

    def _terms_value(terms, lam: frozenset[str], read_letter: bool) -> list[int]:
        out: list[int] = []
        for term in terms:
            acc = [0]
            for e in term:
                if e.is_literal:
                    if not read_letter or (e.name in nested and (e.name in lam) != (e.kind == ATOM)):
                        acc = []
                        break
                    continue
                acc = _mono_and(acc, limit_value(e, lam))
                if not acc:
                    break
            out = _mono_or(out, acc)
        return out

    # Bare literals only occur in the initial state, which is visited once.
    by_reqs: dict[tuple[int, ...], int] = {}
    for q, (chi, lam) in enumerate(labels):
        key = tuple(_terms_value(dnf_terms(chi), lam, False))
        by_reqs[key] = by_reqs.get(key, 0) | 1 << q
    chi_reqs = [(states, reqs) for reqs, states in by_reqs.items()]

    bodies = []
    for t in guess:
        terms = []
        for term in dnf_terms(t.args[0]):
            lits = [e for e in term if e.is_literal]
            req = 0
            for e in term:
                if e.is_temporal:
                    req |= bit[e]
            lit_states = 0
            for lam, states in by_lam.items():
                if _lits_hold(lits, lam):
                    lit_states |= states
            terms.append((lit_states, req))
        bodies.append((t.kind == GLOB, terms))

    kept: list[tuple[int, int, tuple[int, ...]]] = []

    def covers(p, c) -> bool:
        # pair p accepts every run that pair c accepts
        _, pf, pis = p
        _, cf, cis = c
        return pf & ~cf == 0 and all(any(ci & ~pi == 0 for ci in cis) for pi in pis)

    for g in range(1 << len(guess)):
        alive = 0
        for states, reqs in chi_reqs:
            if any(r & ~g == 0 for r in reqs):
                alive |= states
        fin = full & ~alive
        infs: list[int] = []
        for i, (is_g, terms) in enumerate(bodies):
            if not g >> i & 1:
                continue
            holds = 0
            for lit_states, req in terms:
                if req & ~g == 0:
                    holds |= lit_states
            if is_g:
                fin |= full & ~holds
            else:
                infs.append(holds)
        if fin == full:
            continue
        ok = full & ~fin
        sets = {s & ok for s in infs}
        if 0 in sets:
            continue
        sets.discard(ok)
        sets = {s for s in sets if not any(o != s and o & ~s == 0 for o in sets)}
        cand = (g, fin, tuple(sorted(sets)) if sets else (ok,))
        if any(covers(p, cand) for p in kept):
            continue
        kept = [p for p in kept if not covers(cand, p)]
        kept.append(cand)

    if not kept:
        pairs = (GrpPair(frozenset(range(n)), (frozenset(range(n)),)),)
    else:
        kept.sort()
        pairs = tuple(GrpPair(_members(fin), tuple(_members(s) for s in sets)) for _, fin, sets in kept)
    return GrpCondition(pairs)


def _mono_min(masks: Iterable[int]) -> list[int]:
    ms = sorted(set(masks), key=lambda m: bin(m).count("1"))
    out: list[int] = []
    for m in ms:
        if not any(o & ~m == 0 for o in out):
            out.append(m)
    return out


def _mono_or(a: list[int], b: list[int]) -> list[int]:
    return _mono_min(a + b)


def _mono_and(a: list[int], b: list[int]) -> list[int]:
    return _mono_min(x | y for x in a for y in b)


def _members(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


# ---------------------------------------------------------------- degeneralization


def degeneralize(aut: Automaton, *, max_states: int = 2_000_000) -> RabinAutomaton:
    """Product of ``aut`` with the cyclic counters of every pair.

    Counter ``i`` advances (wrapping around) when the current state lies in
    the Buchi set it is waiting for.  Pair ``i`` of the result asks to leave
    ``F_i`` forever and to wrap counter ``i`` infinitely often.
    """
    pairs = aut.condition.pairs
    k = len(pairs)
    widths = [p.width for p in pairs]
    inf_sets = [[p.inf[j] for j in range(p.width)] for p in pairs]

    def advance(q: int, wf: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(w % widths[i] + 1 if q in inf_sets[i][w - 1] else w for i, w in enumerate(wf))

    start = (aut.initial, (1,) * k)
    labels = [start]
    index = {start: 0}
    delta: list[list[int]] = []
    queue = deque([0])
    n_letters = 1 << len(aut.alphabet)
    order = _lex_order(len(aut.alphabet), aut.alphabet)
    while queue:
        s = queue.popleft()
        q, wf = labels[s]
        nwf = advance(q, wf)
        row = [0] * n_letters
        for m in order:
            target = (aut.delta[q][m], nwf)
            t = index.get(target)
            if t is None:
                t = index[target] = len(labels)
                if t >= max_states:
                    raise ResourceLimitError(f"more than {max_states} Rabin states")
                labels.append(target)
                queue.append(t)
            row[m] = t
        delta.append(row)

    new_pairs = []
    for i, p in enumerate(pairs):
        fin = frozenset(s for s, (q, _) in enumerate(labels) if q in p.fin)
        last = widths[i]
        hit = frozenset(s for s, (q, wf) in enumerate(labels) if wf[i] == last and q in inf_sets[i][last - 1])
        new_pairs.append(GrpPair(fin, (hit,)))
    return RabinAutomaton(aut.alphabet, delta, 0, GrpCondition(tuple(new_pairs)), labels, source=aut)


# ---------------------------------------------------------------- text format


def format_letter(letter: Iterable[str]) -> str:
    return "{" + ",".join(sorted(letter)) + "}"


def parse_letter(text: str) -> frozenset[str]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise AutomatonFormatError(f"malformed letter {text!r}")
    body = text[1:-1].strip()
    return frozenset(x.strip() for x in body.split(",")) if body else frozenset()


def _ids(s: Iterable[int]) -> str:
    return " ".join(str(x) for x in sorted(s))


def write_automaton(aut: Automaton) -> str:
    """Serialize to the line-oriented ``dgrw``/``drw`` text format."""
    kind = "drw" if isinstance(aut, RabinAutomaton) else "dgrw"
    n = len(aut.alphabet)
    order = _lex_order(n, aut.alphabet)
    letters = {m: format_letter(a for i, a in enumerate(aut.alphabet) if m >> i & 1) for m in order}
    lines = [kind, "alphabet: " + " ".join(aut.alphabet), f"states: {aut.n_states}", f"initial: {aut.initial}"]
    for q, lab in enumerate(aut.labels):
        if isinstance(lab, str):  # read back from a file
            lines.append(f"state {q}: {lab}")
        elif kind == "dgrw":
            lines.append(f"state {q}: {lab[0]} | {format_letter(lab[1])}")
        else:
            lines.append(f"state {q}: {lab[0]} ({','.join(map(str, lab[1]))})")
    for q, row in enumerate(aut.delta):
        for m in order:
            lines.append(f"trans {q} {letters[m]} {row[m]}")
    for i, p in enumerate(aut.condition.pairs, 1):
        if kind == "drw":
            lines.append(f"pair {i} F: {_ids(p.fin)} I: {_ids(p.inf[0])}".replace("  ", " "))
        else:
            parts = [f"pair {i} F: {_ids(p.fin)}"]
            parts += [f"I{j}: {_ids(s)}" for j, s in enumerate(p.inf, 1)]
            lines.append(" ".join(parts).replace("  ", " "))
    return "\n".join(lines) + "\n"


def _parse_pair(rest: str, lineno: int) -> tuple[frozenset[int], list[frozenset[int]]]:
    tokens = rest.split()
    groups: list[tuple[str, list[int]]] = []
    for tok in tokens:
        if tok.endswith(":"):
            groups.append((tok[:-1], []))
        elif not groups:
            raise AutomatonFormatError(f"line {lineno}: expected 'F:'")
        else:
            try:
                groups[-1][1].append(int(tok))
            except ValueError:
                raise AutomatonFormatError(f"line {lineno}: bad state id {tok!r}") from None
    if not groups or groups[0][0] != "F" or len(groups) < 2:
        raise AutomatonFormatError(f"line {lineno}: a pair needs F: and at least one I set")
    for name, _ in groups[1:]:
        if not name.startswith("I"):
            raise AutomatonFormatError(f"line {lineno}: unexpected group {name!r}")
    return frozenset(groups[0][1]), [frozenset(g) for _, g in groups[1:]]


def read_automaton(text: str) -> Automaton:
    """Parse the text format produced by :func:`write_automaton`.

    State labels are kept as raw strings; the transition table and the
    condition are fully reconstructed.
    """
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0][1] not in ("dgrw", "drw"):
        raise AutomatonFormatError("missing 'dgrw' or 'drw' header")
    kind = lines[0][1]
    alphabet: tuple[str, ...] | None = None
    n_states = initial = None
    labels: dict[int, str] = {}
    trans: list[tuple[int, frozenset[str], int, int]] = []
    pairs: list[tuple[int, frozenset[int], list[frozenset[int]]]] = []
    for lineno, ln in lines[1:]:
        head, _, rest = ln.partition(" ")
        try:
            if head == "alphabet:":
                alphabet = tuple(rest.split())
            elif head == "states:":
                n_states = int(rest)
            elif head == "initial:":
                initial = int(rest)
            elif head == "state":
                sid, _, lab = rest.partition(":")
                labels[int(sid)] = lab.strip()
            elif head == "trans":
                src, rest2 = rest.split(" ", 1)
                letter, dst = rest2.rsplit(" ", 1)
                trans.append((int(src), parse_letter(letter), int(dst), lineno))
            elif head == "pair":
                idx, rest2 = rest.split(" ", 1)
                fin, infs = _parse_pair(rest2, lineno)
                pairs.append((int(idx), fin, infs))
            else:
                raise AutomatonFormatError(f"line {lineno}: unknown directive {head!r}")
        except ValueError as exc:
            if isinstance(exc, AutomatonFormatError):
                raise
            raise AutomatonFormatError(f"line {lineno}: {exc}") from None
    if alphabet is None or n_states is None or initial is None:
        raise AutomatonFormatError("alphabet, states and initial are required")
    if not 0 <= initial < n_states:
        raise AutomatonFormatError("initial state out of range")
    n_letters = 1 << len(alphabet)
    pos = {a: i for i, a in enumerate(alphabet)}
    delta: list[list[int | None]] = [[None] * n_letters for _ in range(n_states)]
    for src, letter, dst, lineno in trans:
        if not (0 <= src < n_states and 0 <= dst < n_states):
            raise AutomatonFormatError(f"line {lineno}: state id out of range")
        if not letter <= set(alphabet):
            raise AutomatonFormatError(f"line {lineno}: letter outside the alphabet")
        m = sum(1 << pos[a] for a in letter)
        if delta[src][m] is not None and delta[src][m] != dst:
            raise AutomatonFormatError(f"line {lineno}: nondeterministic transition")
        delta[src][m] = dst
    for q, row in enumerate(delta):
        if any(t is None for t in row):
            raise AutomatonFormatError(f"state {q} is missing transitions")
    if not pairs:
        raise AutomatonFormatError("no acceptance pairs")
    pairs.sort(key=lambda p: p[0])
    for _, fin, infs in pairs:
        if any(not 0 <= x < n_states for s in [fin, *infs] for x in s):
            raise AutomatonFormatError("pair mentions an unknown state")
    cond = GrpCondition(tuple(GrpPair(fin, tuple(infs)) for _, fin, infs in pairs))
    lab_list = [labels.get(q, "") for q in range(n_states)]
    cls = RabinAutomaton if kind == "drw" else Automaton
    return cls(alphabet, delta, initial, cond, lab_list, kind=kind)  # type: ignore[arg-type]


# ---------------------------------------------------------------- bounded equivalence


def _postorder(f: Formula) -> list[Formula]:
    out: list[Formula] = []
    seen: set[Formula] = set()

    def visit(g: Formula):
        if g in seen:
            return
        seen.add(g)
        for a in g.args:
            visit(a)
        out.append(g)

    visit(f)
    return out


def _cycle_start_values(nodes: list[Formula], cycle: Sequence[int], bit: dict[str, int]) -> dict[Formula, bool]:
    """Truth of every subformula at the first position of ``cycle^omega``."""
    n = len(cycle)
    vals: dict[Formula, list[bool]] = {}
    for g in nodes:
        k = g.kind
        if k == TRUE:
            v = [True] * n
        elif k == FALSE:
            v = [False] * n
        elif k == ATOM:
            v = [bool(m & bit[g.name]) for m in cycle]
        elif k == NATOM:
            v = [not m & bit[g.name] for m in cycle]
        elif k == AND:
            v = [all(vals[a][i] for a in g.args) for i in range(n)]
        elif k == OR:
            v = [any(vals[a][i] for a in g.args) for i in range(n)]
        elif k == FIN:
            v = [any(vals[g.args[0]])] * n
        else:
            v = [all(vals[g.args[0]])] * n
        vals[g] = v
    return {g: v[0] for g, v in vals.items()}


def _accepting_starts(aut: Automaton, cyc_masks: Sequence[int]) -> np.ndarray:
    """For each state q: does the run from q on ``cycle^omega`` satisfy the condition?"""
    delta = aut.delta
    nq = aut.n_states
    image = [0] * nq
    trav = [0] * nq
    for q in range(nq):
        s, seen = q, 0
        for m in cyc_masks:
            seen |= 1 << s
            s = delta[s][m]
        image[q] = s
        trav[q] = seen
    pairs = [(_mask_of(p.fin), [_mask_of(s) for s in p.inf]) for p in aut.condition.pairs]
    verdict = [None] * nq
    for q in range(nq):
        if verdict[q] is not None:
            continue
        path, pos = [], {}
        s = q
        while verdict[s] is None and s not in pos:
            pos[s] = len(path)
            path.append(s)
            s = image[s]
        if verdict[s] is None:
            loop = path[pos[s] :]
            inf = 0
            for x in loop:
                inf |= trav[x]
            ok = any(inf & fin == 0 and all(inf & i for i in infs) for fin, infs in pairs)
            for x in loop:
                verdict[x] = ok
        v = verdict[s]
        for x in path:
            if verdict[x] is None:
                verdict[x] = v
    return np.array(verdict, dtype=bool)


def _mask_of(states: Iterable[int]) -> int:
    m = 0
    for s in states:
        m |= 1 << s
    return m


def check_equiv_bounded(aut: Automaton, f: Formula | str, bound: int) -> LassoWord | None:
    """Compare ``aut`` with the semantics of ``f`` on every lasso ``u v^omega``.

    Covers ``|u| <= bound`` and ``1 <= |v| <= bound`` over the union of both
    alphabets.  Returns the first disagreeing lasso, or ``None``.
    """
    if isinstance(f, str):
        f = parse(f)
    names = tuple(sorted(set(aut.alphabet) | atoms(f)))
    bit = {a: 1 << i for i, a in enumerate(names)}
    n_letters = 1 << len(names)
    to_aut = np.array(
        [sum(1 << j for j, a in enumerate(aut.alphabet) if m & bit[a]) for m in range(n_letters)], dtype=np.int64
    )
    delta = np.array(aut.delta, dtype=np.int64)[:, to_aut]
    nodes = _postorder(f)

    prefixes = []
    for plen in range(bound + 1):
        cols = np.indices((n_letters,) * plen).reshape(plen, -1) if plen else np.zeros((0, 1), dtype=np.int64)
        qs = np.full(cols.shape[1], aut.initial, dtype=np.int64)
        for i in range(plen):
            qs = delta[qs, cols[i]]
        prefixes.append((cols, qs))

    def letter_of(m: int) -> frozenset[str]:
        return frozenset(a for a in names if m & bit[a])

    for clen in range(1, bound + 1):
        for cyc in cartesian(range(n_letters), repeat=clen):
            start = _cycle_start_values(nodes, cyc, bit)
            acc = _accepting_starts(aut, [int(to_aut[m]) for m in cyc])
            for cols, qs in prefixes:
                plen, width = cols.shape
                vals = {g: np.full(width, start[g]) for g in nodes}
                for i in range(plen - 1, -1, -1):
                    col = cols[i]
                    cur: dict[Formula, np.ndarray] = {}
                    for g in nodes:
                        k = g.kind
                        if k == TRUE:
                            v = np.ones(width, dtype=bool)
                        elif k == FALSE:
                            v = np.zeros(width, dtype=bool)
                        elif k == ATOM:
                            v = (col & bit[g.name]) != 0
                        elif k == NATOM:
                            v = (col & bit[g.name]) == 0
                        elif k == AND:
                            v = np.logical_and.reduce([cur[a] for a in g.args])
                        elif k == OR:
                            v = np.logical_or.reduce([cur[a] for a in g.args])
                        elif k == FIN:
                            v = cur[g.args[0]] | vals[g]
                        else:
                            v = cur[g.args[0]] & vals[g]
                        cur[g] = v
                    vals = cur
                bad = np.nonzero(vals[f] != acc[qs])[0]
                if bad.size:
                    j = int(bad[0])
                    return LassoWord(
                        tuple(letter_of(int(cols[i, j])) for i in range(plen)),
                        tuple(letter_of(m) for m in cyc),
                    )
    return None
