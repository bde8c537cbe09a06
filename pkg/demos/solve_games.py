"""
Games with generalized Rabin objectives
=======================================

Solve LTL games on the benchmark arenas with the progress-ranking solver and
the fixpoint solver, and inspect the extracted finite-memory strategy.
"""
import time

from genrabin.bench import TABLE2, gen_appendix_arena
from genrabin.games import format_game, format_strategy, solve_ltl_game, verify_strategy

###############################################################################
# The arena
# ---------
# Vertices pair an arena position with the letter that led there.

g = gen_appendix_arena(1)
print(format_game(g))

###############################################################################
# Solving
# -------

formula = TABLE2[0][1]
for solver in ("ranking", "symbolic"):
    t0 = time.perf_counter()
    res = solve_ltl_game(g, formula, solver=solver)
    print(f"{solver:9s} winner=player{res.winner} product={res.product.n} ({time.perf_counter() - t0:.2f} s)")

###############################################################################
# The strategy
# ------------
# Memory is the waiting vector of the condition.  The check below explores
# every play consistent with the strategy.

res = solve_ltl_game(g, formula)
assert verify_strategy(res.product, res.strategy)
print("\n".join(format_strategy(res.strategy).splitlines()[:12]))
