"""
Maximal satisfaction probabilities
==================================

Model-check random MDPs through the generalized automaton and through its
degeneralization, then compare against brute force over memoryless
strategies.
"""
import numpy as np

from genrabin.bench import gen_random_mdp
from genrabin.mdp import format_mdp, model_check, model_check_detailed
from genrabin.oracle import oracle_max_prob

###############################################################################
# A random model
# --------------
# Probabilities are small rationals so the exact answers stay readable.

m = gen_random_mdp(3, 6, 2, 2)
print(format_mdp(m))

###############################################################################
# Exact values and product sizes
# ------------------------------

formulas = ["G F a", "F G a | G F b", "(G F a & G F b) | (F G !a & F G !b)", "F (a & G b)"]
for text in formulas:
    gr = model_check_detailed(m, text)
    r = model_check_detailed(m, text, via="drw")
    print(f"{text:40s} max={gr.value!s:6s} product {gr.product_states:3d} vs {r.product_states:3d}")
    print(f"{'':40s} min={model_check(m, text, 'min')}")

###############################################################################
# Agreement with brute force
# --------------------------
# Value iteration is compared with the exact answers as well.

errors = []
for seed in range(30):
    mdp = gen_random_mdp(seed, 5, 2, 2)
    for text in formulas:
        exact = model_check(mdp, text)
        assert exact == oracle_max_prob(mdp, text)
        errors.append(abs(model_check(mdp, text, exact=False, epsilon=1e-9) - float(exact)))
errors = np.array(errors)
print(f"{errors.size} checks, largest iterative error {errors.max():.2e}")
