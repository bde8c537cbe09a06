"""
From formulas to automata
=========================

Build deterministic automata for a few LTL(F,G) formulas, look at their
acceptance conditions and compare them with the plain Rabin automata
obtained by degeneralization.
"""
import numpy as np

from genrabin import build_dgrw, check_equiv_bounded, degeneralize, write_automaton
from genrabin.bench import gen_fairness

###############################################################################
# A first automaton
# -----------------
# States pair the formula still to be satisfied with the last letter read.

aut = build_dgrw("F a | G b")
print(write_automaton(aut))

###############################################################################
# Recurring obligations
# ---------------------
# Two Buchi sets in one pair keep the automaton at two states.  A Rabin
# automaton has to count which set it is waiting for, so it doubles.

gen = build_dgrw("G F a & G F !a")
drw = degeneralize(gen)
print(f"generalized: {gen.n_states} states, widths {gen.condition.widths}")
print(f"degeneralized: {drw.n_states} states")

###############################################################################
# The fairness family
# -------------------
# State counts grow with the alphabet while the index grows much faster.

rows = []
for n in range(1, 5):
    a = build_dgrw(gen_fairness(n))
    rows.append((n, a.n_states, len(a.condition.pairs), a.condition.index))
table = np.array(rows)
print(" n  states  pairs  index")
for n, states, pairs, index in table:
    print(f"{n:2d} {states:7d} {pairs:6d} {index:7d}")
print("log10 of the Rabin state bound:", np.round(np.log10(table[:, 1] * table[:, 3]), 2))

###############################################################################
# Checking the result
# -------------------
# Every lasso word with short prefix and cycle is compared with the formula.

for text in ["G (a | F b)", "(G F a | F G !b) & (G F b | F G !a)"]:
    a = build_dgrw(text)
    assert check_equiv_bounded(a, text, 3) is None
    assert check_equiv_bounded(degeneralize(a), text, 3) is None
    print(f"{text}: equal on all lassos up to length 3")
