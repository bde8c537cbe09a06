"""Shared formula and model corpora for the test-suite."""

import random

from genrabin.bench import TABLE1, TABLE2, gen_fairness, random_formula
from genrabin.ltl import canonicalize, parse, subformulas

# Worked examples and table formulas with at most three atoms.
EXAMPLE_FORMULAS = [
    "F a | G b",
    "G F a & G F !a",
    str(gen_fairness(1)),
    "G F a & G F b & G F c",
    "(G F a | F G !b) & (G F b | F G !c)",
    "(G F a | F G !a) & (G F b | F G !b)",
    "(G F a | F G !b) & (G F b | F G !c) & (G F c | F G !a)",
    TABLE2[0][1],
    TABLE2[1][1],
    "F G (a | !b | c)",
]

# Paper formulas over four or more atoms; bound 4 is out of reach for these.
LARGE_FORMULAS = [str(gen_fairness(2)), str(gen_fairness(3)), TABLE1[1][1]]


def random_corpus(seed: int = 2024, count: int = 22) -> list[str]:
    """Distinct random formulas: two-atom ones at depth 3 plus a few with three atoms."""
    rng = random.Random(seed)
    out: list[str] = []
    seen = set(canonicalize(parse(t)) for t in EXAMPLE_FORMULAS)
    while len(out) < count:
        names = "abc" if len(out) % 6 == 5 else "ab"
        f = canonicalize(random_formula(rng, names, 3))
        if f in seen or len(subformulas(f)) < 4:
            continue
        seen.add(f)
        out.append(str(f))
    return out


EQUIV_CORPUS = EXAMPLE_FORMULAS + random_corpus()

MC_FORMULAS = [
    "G F a",
    "F G a | G F b",
    "(G F a | F G !b) & (G F b | F G !a)",
    "F (a & G b)",
    "G (a | F b)",
    "G F a & G F b & G F !a",
    "(G F a & G F b) | (F G !a & F G !b)",
    "F G (a | b) & G F !a",
    "a & F G b | G F a & !b",
]

INFINITARY_FORMULAS = [
    "G F a",
    "F G a | G F b",
    "(G F a | F G !b) & (G F b | F G !a)",
    "G F a & G F b & G F !a",
    "(G F a & G F b) | (F G !a & F G !b)",
    "F G (a | b) & G F !a",
    "G F (a & F G b)",
]
