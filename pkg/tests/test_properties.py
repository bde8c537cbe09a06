"""Randomised properties over formulas, words and small models."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from genrabin.automata import build_dgrw, degeneralize
from genrabin.bench import gen_random_grp_game, gen_random_mdp
from genrabin.games import solve_ranking, solve_symbolic, verify_strategy
from genrabin.ltl import (
    FF,
    TT,
    LassoWord,
    always,
    atom,
    canonicalize,
    conj,
    disj,
    eval_lasso,
    eventually,
    neg_atom,
    negate,
    parse,
)
from genrabin.mdp import model_check
from genrabin.oracle import oracle_max_prob

NAMES = ("a", "b")
SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])

literals = st.sampled_from(NAMES).flatmap(lambda n: st.sampled_from([atom(n), neg_atom(n)]))
formulas = st.recursive(
    literals | st.sampled_from([TT, FF]),
    lambda sub: st.one_of(
        st.builds(eventually, sub),
        st.builds(always, sub),
        st.builds(conj, sub, sub),
        st.builds(disj, sub, sub),
    ),
    max_leaves=5,
)
letters = st.frozensets(st.sampled_from(NAMES))
words = st.builds(
    LassoWord,
    st.lists(letters, max_size=3).map(tuple),
    st.lists(letters, min_size=1, max_size=3).map(tuple),
)


@SETTINGS
@given(formulas, words)
def test_canonical_form_keeps_meaning(f, w):
    assert eval_lasso(canonicalize(f), w) == eval_lasso(f, w)


@SETTINGS
@given(formulas, words)
def test_negation_complements(f, w):
    assert eval_lasso(negate(f), w) != eval_lasso(f, w)


@SETTINGS
@given(formulas)
def test_text_round_trip(f):
    assert parse(str(f)) == canonicalize(f)


@SETTINGS
@given(formulas, st.lists(words, min_size=1, max_size=6))
def test_automata_accept_exactly_the_models(f, ws):
    aut = build_dgrw(f)
    drw = degeneralize(aut)
    for w in ws:
        want = eval_lasso(f, w)
        assert aut.accepts(w) == want
        assert drw.accepts(w) == want


@settings(max_examples=25, deadline=None)
@given(formulas, st.integers(0, 10_000))
def test_model_checking_matches_oracle(f, seed):
    m = gen_random_mdp(seed, 4, 2, 2)
    assert model_check(m, f) == oracle_max_prob(m, f)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6), st.integers(1, 3))
def test_game_solvers_agree(seed, n, k):
    gg = gen_random_grp_game(seed, n, k, 2)
    res = solve_ranking(gg)
    assert res.winning == solve_symbolic(gg)
    assert verify_strategy(gg, res.strategy)
