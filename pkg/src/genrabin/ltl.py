"""LTL(F,G) formulas in negation normal form.

Formulas are hash-consed: structurally equal formulas are the same object,
so identity comparison, hashing and use as dictionary keys are cheap.
Canonicalization yields a Blake-style disjunctive normal form over
"elements" (atom literals and temporal subformulas) with absorption
modulo the implications G x -> x, G x -> FG x -> GF x -> F x.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Formula",
    "TT",
    "FF",
    "atom",
    "neg_atom",
    "conj",
    "disj",
    "eventually",
    "always",
    "negate",
    "parse",
    "canonicalize",
    "atoms",
    "nested_atoms",
    "is_infinitary",
    "fg_subformulas",
    "subformulas",
    "elements",
    "dnf_terms",
    "LassoWord",
    "eval_lasso",
    "FormulaError",
    "FormulaSyntaxError",
    "UnknownAtomError",
    "UnsupportedOperatorError",
]

# Node kinds double as the primary sort rank.
TRUE, FALSE, ATOM, NATOM, AND, OR, FIN, GLOB = range(8)
_KIND_NAMES = ("true", "false", "atom", "natom", "and", "or", "F", "G")


class Formula:
    """An immutable, interned NNF formula node.

    Use the module constructors (:func:`atom`, :func:`conj`, ...) rather than
    instantiating directly.
    """

    __slots__ = ("kind", "name", "args", "key", "_hash")
    _table: dict = {}

    def __new__(cls, kind: int, name: str | None = None, args: tuple = ()):
        ident = (kind, name, args)
        node = cls._table.get(ident)
        if node is None:
            node = object.__new__(cls)
            object.__setattr__(node, "kind", kind)
            object.__setattr__(node, "name", name)
            object.__setattr__(node, "args", args)
            object.__setattr__(node, "_hash", hash(ident))
            object.__setattr__(
                node, "key", (kind, tuple(a.key for a in args), name or "")
            )
            cls._table[ident] = node
        return node

    def __setattr__(self, attr, value):
        raise AttributeError("Formula nodes are immutable")

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        return (Formula, (self.kind, self.name, self.args))

    def __lt__(self, other: "Formula") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"Formula({self})"

    def __str__(self) -> str:
        return _to_text(self)

    @property
    def is_literal(self) -> bool:
        return self.kind in (ATOM, NATOM)

    @property
    def is_temporal(self) -> bool:
        return self.kind in (FIN, GLOB)

    @property
    def kind_name(self) -> str:
        return _KIND_NAMES[self.kind]


TT = Formula(TRUE)
FF = Formula(FALSE)


def atom(name: str) -> Formula:
    return Formula(ATOM, name)


def neg_atom(name: str) -> Formula:
    return Formula(NATOM, name)


def _junction(kind: int, parts: Iterable[Formula]) -> Formula:
    unit, zero = (TT, FF) if kind == AND else (FF, TT)
    flat: set[Formula] = set()
    for p in parts:
        if p is zero:
            return zero
        if p is unit:
            continue
        if p.kind == kind:
            flat.update(p.args)
        else:
            flat.add(p)
    if not flat:
        return unit
    if len(flat) == 1:
        return next(iter(flat))
    return Formula(kind, None, tuple(sorted(flat, key=lambda f: f.key)))


def conj(*parts: Formula) -> Formula:
    """Flattened, deduplicated, sorted conjunction (no further simplification)."""
    return _junction(AND, parts)


def disj(*parts: Formula) -> Formula:
    return _junction(OR, parts)


def eventually(sub: Formula) -> Formula:
    # F F x = F x and F G F x = G F x
    if sub is TT or sub is FF or sub.kind == FIN or (sub.kind == GLOB and sub.args[0].kind == FIN):
        return sub
    return Formula(FIN, None, (sub,))


def always(sub: Formula) -> Formula:
    # G G x = G x and G F G x = F G x
    if sub is TT or sub is FF or sub.kind == GLOB or (sub.kind == FIN and sub.args[0].kind == GLOB):
        return sub
    return Formula(GLOB, None, (sub,))


@lru_cache(maxsize=None)
def negate(f: Formula) -> Formula:
    """NNF of the negation of ``f`` (dualizes every operator)."""
    k = f.kind
    if k == TRUE:
        return FF
    if k == FALSE:
        return TT
    if k == ATOM:
        return neg_atom(f.name)
    if k == NATOM:
        return atom(f.name)
    if k == AND:
        return disj(*(negate(a) for a in f.args))
    if k == OR:
        return conj(*(negate(a) for a in f.args))
    if k == FIN:
        return always(negate(f.args[0]))
    return eventually(negate(f.args[0]))


# ---------------------------------------------------------------- printing


def _to_text(f: Formula) -> str:
    k = f.kind
    if k == TRUE:
        return "true"
    if k == FALSE:
        return "false"
    if k == ATOM:
        return f.name
    if k == NATOM:
        return "!" + f.name
    if k in (FIN, GLOB):
        sub = f.args[0]
        inner = _to_text(sub)
        if sub.kind in (AND, OR):
            inner = f"({inner})"
        return ("F " if k == FIN else "G ") + inner
    parts = []
    for a in f.args:
        s = _to_text(a)
        if k == AND and a.kind == OR:
            s = f"({s})"
        parts.append(s)
    return (" & " if k == AND else " | ").join(parts)


# ---------------------------------------------------------------- parsing


class FormulaError(ValueError):
    """Base class for formula input errors."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownAtomError(FormulaError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown atom {name!r} at position {position}")
        self.name = name
        self.position = position


class UnsupportedOperatorError(FormulaError):
    def __init__(self, op: str, position: int):
        super().__init__(f"unsupported operator {op!r} at position {position}")
        self.op = op
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[!&|()])|(?P<bad>\S))")
_UNSUPPORTED = {"U", "X", "R", "W", "M"}
_UNSUPPORTED_SYMBOLS = {"->", "<->", "=>", "<=>"}


def _tokenize(text: str, ap: frozenset | None) -> list[tuple[str, str, int]]:
    out: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:  # only trailing whitespace left
            break
        start = m.start(m.lastgroup)
        tok = m.group(m.lastgroup)
        pos = m.end()
        if m.lastgroup == "bad":
            for sym in _UNSUPPORTED_SYMBOLS:
                if text.startswith(sym, start):
                    raise UnsupportedOperatorError(sym, start)
            raise FormulaSyntaxError(f"unexpected character {tok!r}", start)
        if m.lastgroup == "op":
            out.append(("op", tok, start))
            continue
        if tok in ("true", "false"):
            out.append(("const", tok, start))
        elif set(tok) <= {"F", "G"}:
            out.extend(("op", ch, start + j) for j, ch in enumerate(tok))
        elif ap is not None and tok in ap:
            out.append(("atom", tok, start))
        elif tok in _UNSUPPORTED:
            raise UnsupportedOperatorError(tok, start)
        else:
            # Glued operator prefixes such as "FGa" or "GFb".
            i = 0
            while i < len(tok) - 1 and tok[i] in "FG":
                i += 1
            rest = tok[i:]
            if i and (ap is None or rest in ap) and rest not in _UNSUPPORTED:
                for j in range(i):
                    out.append(("op", tok[j], start + j))
                out.append(("atom", rest, start + i))
            elif ap is not None:
                raise UnknownAtomError(tok, start)
            else:
                out.append(("atom", tok, start))
    return out


class _Parser:
    def __init__(self, text: str, ap: frozenset | None):
        self.text = text
        self.toks = _tokenize(text, ap)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def fail(self, msg: str):
        tok = self.peek()
        raise FormulaSyntaxError(msg, tok[2] if tok else len(self.text))

    def parse(self):
        if not self.toks:
            self.fail("empty formula")
        tree = self.disjunction()
        if self.peek() is not None:
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return tree

    def disjunction(self):
        parts = [self.conjunction()]
        while (t := self.peek()) is not None and t[1] == "|":
            self.i += 1
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else ("or", parts)

    def conjunction(self):
        parts = [self.unary()]
        while (t := self.peek()) is not None and t[1] == "&":
            self.i += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else ("and", parts)

    def unary(self):
        t = self.peek()
        if t is None:
            self.fail("unexpected end of input")
        kind, tok, _ = t
        if kind == "op" and tok in ("!", "F", "G"):
            self.i += 1
            return (tok, self.unary())
        if kind == "op" and tok == "(":
            self.i += 1
            inner = self.disjunction()
            t = self.peek()
            if t is None or t[1] != ")":
                self.fail("expected ')'")
            self.i += 1
            return inner
        if kind == "const":
            self.i += 1
            return ("const", tok == "true")
        if kind == "atom":
            self.i += 1
            return ("atom", tok)
        self.fail(f"unexpected token {tok!r}")


def _nnf(tree, positive: bool) -> Formula:
    tag = tree[0]
    if tag == "const":
        return TT if tree[1] == positive else FF
    if tag == "atom":
        return atom(tree[1]) if positive else neg_atom(tree[1])
    if tag == "!":
        return _nnf(tree[1], not positive)
    if tag in ("and", "or"):
        parts = [_nnf(t, positive) for t in tree[1]]
        return conj(*parts) if (tag == "and") == positive else disj(*parts)
    sub = _nnf(tree[1], positive)
    return eventually(sub) if (tag == "F") == positive else always(sub)


def parse(text: str, ap: Iterable[str] | None = None) -> Formula:
    """Parse ``text`` into a canonical NNF formula.

    Grammar: ``! & | F G ( ) true false`` and identifiers; unary operators
    bind tighter than ``&``, which binds tighter than ``|``.  Glued prefixes
    like ``GFa`` are read as ``G F a``.  When ``ap`` is given, every atom must
    belong to it.
    """
    apset = frozenset(ap) if ap is not None else None
    return canonicalize(_nnf(_Parser(text, apset).parse(), True))


# ---------------------------------------------------------------- structure


@lru_cache(maxsize=None)
def atoms(f: Formula) -> frozenset[str]:
    if f.is_literal:
        return frozenset((f.name,))
    out: frozenset[str] = frozenset()
    for a in f.args:
        out |= atoms(a)
    return out


def _occurrences(f: Formula, under_f=False, under_g=False) -> Iterator[tuple[str, bool, bool]]:
    if f.is_literal:
        yield f.name, under_f, under_g
        return
    for a in f.args:
        yield from _occurrences(a, under_f or f.kind == FIN, under_g or f.kind == GLOB)


@lru_cache(maxsize=None)
def nested_atoms(f: Formula) -> frozenset[str]:
    """Atoms having an occurrence below both an F and a G."""
    return frozenset(n for n, uf, ug in _occurrences(f) if uf and ug)


def is_infinitary(f: Formula) -> bool:
    """True when every atom occurrence lies below both an F and a G."""
    return all(uf and ug for _, uf, ug in _occurrences(f))


def subformulas(f: Formula) -> set[Formula]:
    seen: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g not in seen:
            seen.add(g)
            stack.extend(g.args)
    return seen


def fg_subformulas(f: Formula) -> tuple[set[Formula], set[Formula]]:
    """The F-rooted and G-rooted subformulas of ``f``, including nested ones."""
    subs = subformulas(f)
    return {g for g in subs if g.kind == FIN}, {g for g in subs if g.kind == GLOB}


# ---------------------------------------------------------------- lasso semantics


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word ``prefix . cycle^omega``."""

    prefix: tuple[frozenset[str], ...]
    cycle: tuple[frozenset[str], ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be non-empty")
        object.__setattr__(self, "prefix", tuple(frozenset(x) for x in self.prefix))
        object.__setattr__(self, "cycle", tuple(frozenset(x) for x in self.cycle))

    def letter(self, i: int) -> frozenset[str]:
        p = len(self.prefix)
        return self.prefix[i] if i < p else self.cycle[(i - p) % len(self.cycle)]


def eval_lasso(f: Formula, w: LassoWord) -> bool:
    """Decide ``w |= f`` by evaluating every subformula at every lasso position."""
    letters = w.prefix + w.cycle
    p, n = len(w.prefix), len(letters)
    memo: dict[Formula, list[bool]] = {}

    def ev(g: Formula) -> list[bool]:
        got = memo.get(g)
        if got is not None:
            return got
        k = g.kind
        if k == TRUE:
            val = [True] * n
        elif k == FALSE:
            val = [False] * n
        elif k == ATOM:
            val = [g.name in x for x in letters]
        elif k == NATOM:
            val = [g.name not in x for x in letters]
        elif k in (AND, OR):
            cols = [ev(a) for a in g.args]
            agg = all if k == AND else any
            val = [agg(c[i] for c in cols) for i in range(n)]
        else:
            sub = ev(g.args[0])
            agg = any if k == FIN else all
            on_cycle = agg(sub[p:])
            val = [on_cycle] * n
            for i in range(p - 1, -1, -1):
                val[i] = (sub[i] or val[i + 1]) if k == FIN else (sub[i] and val[i + 1])
        memo[g] = val
        return val

    return ev(f)[0]


# ---------------------------------------------------------------- implication

# Elements are literals or temporal formulas; they are the letters of the
# DNF.  The relation below is sound but deliberately incomplete: it knows
# G x -> x, G x -> FG x -> GF x -> F x, and monotonicity of F and G.


@lru_cache(maxsize=None)
def _implies(p: Formula, q: Formula) -> bool:
    """Structural, sound check that ``p`` entails ``q``."""
    if p is q or p is FF or q is TT:
        return True
    if q.kind == AND:
        return all(_implies(p, c) for c in q.args)
    if p.kind == OR:
        return all(_implies(c, q) for c in p.args)
    if p.kind == AND and any(_implies(c, q) for c in p.args):
        return True
    if q.kind == OR and any(_implies(p, c) for c in q.args):
        return True
    if p.kind in (AND, OR, TRUE) or q.kind in (AND, OR, FALSE):
        return False
    return _element_implies(p, q)


def _element_implies(x: Formula, y: Formula) -> bool:
    if y.kind == FIN and _implies(x, y.args[0]):
        return True
    if x.kind == GLOB:
        psi = x.args[0]
        if _implies(psi, y):
            return True
        if y.kind == GLOB:
            return _implies(psi, y.args[0])
        if y.kind == FIN:
            theta = y.args[0]
            return theta.kind == GLOB and _implies(psi, theta.args[0])
        return False
    if x.kind == FIN:
        chi = x.args[0]
        if y.kind == FIN and _implies(chi, y.args[0]):
            return True
        if chi.kind == GLOB and y.kind == GLOB and y.args[0].kind == FIN:
            return _implies(chi.args[0], y.args[0].args[0])
    return False


# ---------------------------------------------------------------- DNF


def _complement(lit: Formula) -> Formula:
    return neg_atom(lit.name) if lit.kind == ATOM else atom(lit.name)


def _contradictory(term: frozenset[Formula]) -> bool:
    for x in term:
        if x.is_literal:
            c = _complement(x)
            if c in term:
                return True
            if any(y.is_temporal and _implies(y, c) for y in term):
                return True
    return False


def _reduce(term: frozenset[Formula]) -> frozenset[Formula]:
    """Drop elements implied by another element of the same term."""
    keep = []
    for y in term:
        redundant = False
        for x in term:
            if x is not y and _implies(x, y) and (not _implies(y, x) or x.key < y.key):
                redundant = True
                break
        if not redundant:
            keep.append(y)
    return frozenset(keep) if len(keep) != len(term) else term


def _subsumes(t1: frozenset[Formula], t2: frozenset[Formula]) -> bool:
    """Every model of term ``t2`` is a model of term ``t1``."""
    return all(any(_implies(x, y) for x in t2) for y in t1)


def _add_term(terms: list[frozenset[Formula]], t: frozenset[Formula]) -> bool:
    if any(_subsumes(s, t) for s in terms):
        return False
    terms[:] = [s for s in terms if not _subsumes(t, s)]
    terms.append(t)
    return True


def _blake(raw: Iterable[frozenset[Formula]]) -> list[frozenset[Formula]]:
    terms: list[frozenset[Formula]] = []
    for t in raw:
        if not _contradictory(t):
            _add_term(terms, _reduce(t))
    changed = True
    while changed:
        changed = False
        for i, t1 in enumerate(terms):
            for lit in t1:
                if lit.kind != ATOM:
                    continue
                c = _complement(lit)
                for t2 in terms[i + 1 :] + terms[:i]:
                    if c not in t2:
                        continue
                    r = (t1 - {lit}) | (t2 - {c})
                    if _contradictory(r):
                        continue
                    if _add_term(terms, _reduce(r)):
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return terms


def _raw_dnf(f: Formula) -> list[frozenset[Formula]]:
    k = f.kind
    if k == TRUE:
        return [frozenset()]
    if k == FALSE:
        return []
    if k in (ATOM, NATOM):
        return [frozenset((f,))]
    if k in (FIN, GLOB):
        c = canonicalize(f)
        if c is TT:
            return [frozenset()]
        if c is FF:
            return []
        return [frozenset((c,))]
    if k == OR:
        out: list[frozenset[Formula]] = []
        for a in f.args:
            out.extend(_raw_dnf(a))
        return out
    acc: list[frozenset[Formula]] = [frozenset()]
    for a in f.args:
        part = _raw_dnf(a)
        nxt: list[frozenset[Formula]] = []
        for t1, t2 in product(acc, part):
            t = t1 | t2
            if not _contradictory(t):
                _add_term(nxt, _reduce(t))
        acc = nxt
        if not acc:
            break
    return acc


@lru_cache(maxsize=None)
def canonicalize(f: Formula) -> Formula:
    """Canonical representative of ``f``.

    Bodies of temporal operators are canonicalized recursively; Boolean
    structure becomes a consensus-closed, absorption-reduced DNF whose terms
    list only their minimal elements.
    """
    k = f.kind
    if k in (TRUE, FALSE, ATOM, NATOM):
        return f
    if k == FIN:
        return eventually(canonicalize(f.args[0]))
    if k == GLOB:
        return always(canonicalize(f.args[0]))
    terms = _blake(_raw_dnf(f))
    if not terms:
        return FF
    return disj(*(conj(*t) if t else TT for t in terms))


def dnf_terms(f: Formula) -> list[frozenset[Formula]]:
    """Terms of a canonical formula, each a set of elements."""
    if f is FF:
        return []
    if f is TT:
        return [frozenset()]
    parts = f.args if f.kind == OR else (f,)
    return [frozenset(p.args) if p.kind == AND else frozenset((p,)) for p in parts]


def elements(f: Formula) -> set[Formula]:
    """Literals and temporal subformulas at the Boolean top level of ``f``."""
    out: set[Formula] = set()
    for t in dnf_terms(canonicalize(f)):
        out |= t
    return out


def letters_over(names: Sequence[str]) -> list[frozenset[str]]:
    """All subsets of ``names`` in lexicographic order of their sorted tuples."""
    names = sorted(names)
    subsets = [tuple(n for i, n in enumerate(names) if m >> i & 1) for m in range(1 << len(names))]
    return [frozenset(s) for s in sorted(subsets)]
