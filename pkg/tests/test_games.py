import itertools

import pytest

from genrabin.automata import GrpCondition, GrpPair, ResourceLimitError
from genrabin.bench import TABLE2, appendix_arena_edges, gen_appendix_arena, gen_random_game, gen_random_grp_game
from genrabin.games import (
    Game,
    GameError,
    GrpGame,
    RankingSolver,
    Strategy,
    degeneralized_game,
    format_game,
    format_strategy,
    next_wf,
    parse_game,
    player0_can_win,
    solve_ltl_game,
    solve_ranking,
    solve_symbolic,
    verify_strategy,
    waiting_vectors,
)

FORMULA1 = TABLE2[0][1]

TWO = """\
game
states: 2
init: 0
player0: 0
player1: 1
label 0: a
edge 0 0
edge 0 1
edge 1 0
edge 1 1
"""


def pair(fin, *infs):
    return GrpPair(frozenset(fin), tuple(frozenset(s) for s in infs))


def single(owner, *pairs):
    return GrpGame(Game([(0,)], [owner], [frozenset()]), GrpCondition(tuple(pairs)))


def all_ranks(n, k):
    out = []
    for w0 in range(n + 1):
        for perm in itertools.permutations(range(1, k + 1)):
            for ws in itertools.product(range(n + 1), repeat=k):
                out.append((w0,) + tuple(x for p, w in zip(perm, ws) for x in (p, w)))
    return sorted(out)


class TestFormat:
    def test_round_trip(self):
        g = parse_game(TWO)
        assert format_game(g) == TWO
        assert g.owner == [0, 1] and g.succ == [(0, 1), (0, 1)]

    @pytest.mark.parametrize(
        "mutation,message",
        [
            (lambda s: s.replace("edge 1 1", "edge 1 5"), "dangling vertex id"),
            (lambda s: s.replace("player1: 1", "player1: 0 1"), "duplicate vertex id"),
            (lambda s: s.replace("player1: 1", "player1:"), "no owner"),
            (lambda s: s.replace("edge 1 0\nedge 1 1\n", ""), "no outgoing edge"),
            (lambda s: s.replace("game\n", ""), "header"),
            (lambda s: s.replace("edge 0 1", "edge 0 0"), "duplicate edge"),
        ],
    )
    def test_validation(self, mutation, message):
        with pytest.raises(GameError, match=message):
            parse_game(mutation(TWO))

    def test_condition_must_name_known_vertices(self):
        with pytest.raises(GameError):
            GrpGame(parse_game(TWO), GrpCondition((pair({5}, {0}),)))


class TestRankOrder:
    def test_next_wf_cycles(self):
        cond = GrpCondition((pair((), {0}, {1}), pair((), {0})))
        assert next_wf(cond, 0, (1, 1)) == (2, 1)
        assert next_wf(cond, 1, (2, 1)) == (1, 1)
        assert next_wf(cond, 1, (1, 1)) == (1, 1)
        assert waiting_vectors(cond) == [(1, 1), (2, 1)]

    def test_infinity_is_top(self):
        s = RankingSolver(single(0, pair((), {0})))
        assert s.rank_greater(0, 0, s.inf, s.bottom)
        assert not s.rank_greater(0, 0, s.bottom, s.inf)
        assert s.min_increase(0, 0, s.inf) == s.inf

    def test_weight_bump_example(self):
        # k = 1, one Buchi set, v outside F and I: (0, 1, 2) -> (0, 1, 3) when 3 <= n
        g = Game([(1,), (2,), (3,), (0,)], [0] * 4, [frozenset()] * 4)
        s = RankingSolver(GrpGame(g, GrpCondition((pair({1}, {2}),))))
        assert s.n == 4
        assert s.min_increase(0, 0, (0, 1, 2)) == (0, 1, 3)
        assert s.min_increase(0, 0, (0, 1, 4)) == (1, 1, 0)
        assert s.min_increase(0, 0, (4, 1, 4)) == s.inf

    def test_visit_rule_allows_equal(self):
        s = RankingSolver(single(0, pair((), {0})))
        y = (0, 1, 1)
        assert s.rank_greater(0, 0, y, y)
        assert s.min_increase(0, 0, y) == (0, 1, 0)

    def test_f_member_never_keeps_index(self):
        s = RankingSolver(single(0, pair({0}, {0})))
        assert not s.rank_greater(0, 0, (0, 1, 1), (0, 1, 0))
        assert s.min_increase(0, 0, (0, 1, 0)) == (1, 1, 0)

    @pytest.mark.parametrize("seed", range(12))
    def test_min_increase_brute_force(self, seed):
        gg = gen_random_grp_game(seed, 1 + seed % 3, 1 + seed % 2, 2)
        s = RankingSolver(gg)
        ranks = all_ranks(s.n, s.k) + [s.inf]
        for v in range(s.n):
            for b in range(s.nb):
                for y in ranks:
                    want = next((x for x in ranks if s.rank_greater(v, b, x, y)), s.inf)
                    assert s.min_increase(v, b, y) == want


class TestLift:
    def test_bottom_successors(self):
        gg = GrpGame(parse_game(TWO), GrpCondition((pair({1}, {0}),)))
        s = RankingSolver(gg)
        r = [s.bottom] * (s.n * s.nb)
        assert s.lift(r, 0, 0) == max(s.bottom, s.min_increase(0, 0, s.bottom))

    def test_infinite_stays(self):
        gg = GrpGame(parse_game(TWO), GrpCondition((pair({1}, {0}),)))
        s = RankingSolver(gg)
        r = [s.inf, s.bottom]
        assert s.lift(r, 0, 0) == s.inf

    def test_player1_sees_infinity(self):
        gg = GrpGame(parse_game(TWO), GrpCondition((pair({1}, {0}),)))
        s = RankingSolver(gg)
        r = [s.bottom, s.inf]
        assert s.lift(r, 1, 0) == s.inf

    def test_lift_is_inflationary_and_monotone(self):
        for seed in range(10):
            s = RankingSolver(gen_random_grp_game(seed, 4, 2, 2))
            lo = [s.bottom] * (s.n * s.nb)
            hi = s.solve().values
            mid = [min(a, b) for a, b in zip(hi, [s.min_increase(0, 0, s.bottom)] * len(hi))]
            for v in range(s.n):
                for b in range(s.nb):
                    assert s.lift(lo, v, b) >= lo[v * s.nb + b]
                    assert s.lift(mid, v, b) <= s.lift(hi, v, b)


class TestSolvers:
    def test_trivial_win(self):
        res = solve_ranking(single(0, pair((), {0})))
        assert res.winning == {0}
        assert verify_strategy(res.solver.gg, res.strategy)

    def test_trivial_loss(self):
        gg = single(1, pair({0}, {0}))
        assert solve_ranking(gg).winning == set()
        assert solve_symbolic(gg) == set()

    def test_symbolic_everything_or_nothing(self):
        g = gen_random_game(4, 6)
        q = frozenset(range(g.n))
        assert solve_symbolic(GrpGame(g, GrpCondition((pair((), q),)))) == q
        assert solve_symbolic(GrpGame(g, GrpCondition((pair(q, q),)))) == set()

    def test_budget_guard(self):
        with pytest.raises(ResourceLimitError):
            solve_ranking(gen_random_grp_game(1, 6, 3, 2), budget=100)

    def test_worklist_equals_round_robin(self):
        for seed in range(15):
            s = RankingSolver(gen_random_grp_game(seed, 5, 2, 2))
            fast, slow = s.solve(), s.solve(naive=True)
            assert fast.values == slow.values
            assert fast.lifts <= s.n * s.nb * s.domain_size

    @pytest.mark.parametrize("seed", range(30))
    def test_cross_check(self, seed):
        gg = gen_random_grp_game(seed, 3 + seed % 5, 1 + seed % 3, 2)
        res = solve_ranking(gg)
        assert res.winning == solve_symbolic(gg)
        assert res.solver.is_good(res.ranking)
        assert verify_strategy(gg, res.strategy)
        assert {v for v in range(gg.n) if player0_can_win(gg, v)} == res.winning
        dg = degeneralized_game(gg)
        assert (dg.game.init in solve_ranking(dg).winning) == (gg.game.init in res.winning)


class TestVerify:
    def test_bad_self_loop(self):
        g = Game([(0, 1), (1,)], [0, 0], [frozenset()] * 2)
        gg = GrpGame(g, GrpCondition((pair({0}, {1}),)))
        stay = Strategy([(1,)], {(0, 0): 0, (1, 0): 1}, frozenset({(0, 0)}))
        leave = Strategy([(1,)], {(0, 0): 1, (1, 0): 1}, frozenset({(0, 0)}))
        assert not verify_strategy(gg, stay)
        assert verify_strategy(gg, leave)

    def test_everything_accepting(self):
        g = gen_random_game(2, 5)
        gg = GrpGame(g, GrpCondition((pair((), range(g.n)),)))
        choice = {(v, 0): g.succ[v][0] for v in range(g.n) if g.owner[v] == 0}
        assert verify_strategy(gg, Strategy([(1,)], choice, frozenset({(0, 0)})))

    def test_missing_choice_fails(self):
        gg = single(0, pair((), {0}))
        assert not verify_strategy(gg, Strategy([(1,)], {}, frozenset({(0, 0)})))

    def test_generalized_needs_both_sets(self):
        # player 0 alternates between 1 and 2 only if it leaves the loops
        g = Game([(1, 2), (0,), (0,)], [0, 0, 0], [frozenset()] * 3)
        gg = GrpGame(g, GrpCondition((pair((), {1}, {2}),)))
        res = solve_ranking(gg)
        assert res.winning == {0, 1, 2}
        assert verify_strategy(gg, res.strategy)
        always_one = Strategy(res.strategy.wfs, {k: 1 for k in res.strategy.choice if k[0] == 0}, frozenset({(0, 0)}))
        always_one.choice.update({k: 0 for k in res.strategy.choice if k[0] != 0})
        assert not verify_strategy(gg, always_one)

    def test_strategy_dump(self):
        res = solve_ranking(GrpGame(parse_game(TWO), GrpCondition((pair((), {0}),))))
        text = format_strategy(res.strategy)
        assert text.splitlines()[0] == "memory: 1"
        assert "choice 0 (1) -> 0" in text


class TestLtlGames:
    @pytest.mark.parametrize("owner", [0, 1])
    def test_single_loop(self, owner):
        g = Game([(0,)], [owner], [frozenset({"a"})])
        assert solve_ltl_game(g, "G F a").winner == 0
        assert solve_ltl_game(g, "F G !a").winner == 1

    def test_product_keeps_labels_and_owners(self):
        g = parse_game(TWO)
        res = solve_ltl_game(g, "G F a", solver="both")
        assert res.winner == 0
        assert all(res.product.game.owner[i] == g.owner[v] for i, (v, _) in enumerate(res.product.states))

    def test_player1_can_spoil(self):
        g = parse_game(TWO)
        # player 0 may stay at 0, but from 1 player 1 always returns there
        assert solve_ltl_game(g, "F G a").winner == 0
        assert solve_ltl_game(g, "F G !a").winner == 1
        assert solve_ltl_game(g, "F G !a", solver="symbolic").winner == 1

    def test_unknown_solver(self):
        with pytest.raises(ValueError):
            solve_ltl_game(parse_game(TWO), "G F a", solver="magic")


class TestArenas:
    @pytest.mark.parametrize("copies,arena,encoded", [(1, 3, 12), (2, 6, 22), (3, 9, 34)])
    def test_sizes(self, copies, arena, encoded):
        g = gen_appendix_arena(copies)
        assert g.arena_vertices == arena and g.n == encoded

    @pytest.mark.parametrize("copies", [1, 2, 3])
    def test_letter_sets_partition(self, copies):
        names, owners, edges = appendix_arena_edges(copies)
        everything = {frozenset(x) for r in range(4) for x in itertools.combinations("abc", r)}
        for s in range(len(names)):
            sets = [letters for src, _, letters in edges if src == s]
            assert sum(len(x) for x in sets) == 8
            assert frozenset().union(*sets) == everything
        assert owners.count(0) == copies

    def test_owners_and_labels(self):
        g = gen_appendix_arena(1)
        assert g.owner[0] == 0 and g.labels[0] == frozenset()
        squares = [v for v in range(g.n) if g.owner[v] == 1]
        assert len(squares) == 4

    def test_formula1_first_arena(self):
        res = solve_ltl_game(gen_appendix_arena(1), FORMULA1, solver="both")
        assert res.winner == 0
        assert verify_strategy(res.product, res.strategy)
