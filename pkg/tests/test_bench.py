import csv
import io
import random

import pytest

from genrabin.automata import build_dgrw
from genrabin.bench import (
    COLUMNS,
    TABLE1,
    TABLE2,
    gen_fairness,
    gen_random_game,
    gen_random_mdp,
    random_formula,
    run_suite,
    write_csv,
)
from genrabin.games import format_game, parse_game
from genrabin.ltl import atoms, negate, parse
from genrabin.mdp import format_mdp, parse_mdp


def reachable(succ, start=0):
    seen, stack = {start}, [start]
    while stack:
        for w in succ[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


class TestGenerators:
    def test_fairness_one(self):
        assert gen_fairness(1) == parse("F G a | G F b")

    @pytest.mark.parametrize("n", [0, 5])
    def test_fairness_range(self, n):
        with pytest.raises(ValueError):
            gen_fairness(n)

    def test_fairness_atoms(self):
        assert atoms(gen_fairness(4)) == set("abcdefgh")

    @pytest.mark.parametrize("seed", range(20))
    def test_random_mdp(self, seed):
        m = gen_random_mdp(seed, 7, 3, 3)
        assert format_mdp(m) == format_mdp(gen_random_mdp(seed, 7, 3, 3))
        assert parse_mdp(format_mdp(m)) == m
        assert reachable(m.succ) == set(range(m.n))
        for dist in m.probs:
            if dist is not None:
                assert sum(dist) == 1 and all(p.denominator <= 8 and p > 0 for p in dist)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_game(self, seed):
        g = gen_random_game(seed, 6)
        assert format_game(g) == format_game(gen_random_game(seed, 6))
        assert parse_game(format_game(g)).succ == g.succ
        assert reachable(g.succ) == set(range(g.n))

    def test_seeds_differ(self):
        assert format_mdp(gen_random_mdp(1)) != format_mdp(gen_random_mdp(2))

    def test_random_formula_is_seeded(self):
        a = [str(random_formula(random.Random(5), "ab", 3)) for _ in range(3)]
        assert len(set(a)) == 1


class TestTables:
    @pytest.mark.parametrize("name,text,mode,index", [r for r in TABLE1 if r[0] not in ("cycle3", "safety")][:6])
    def test_reported_index(self, name, text, mode, index):
        f = parse(text)
        aut = build_dgrw(f if mode == "max" else negate(f))
        assert aut.condition.index == index

    def test_cycle3_beats_reported(self):
        # the three-way chain collapses to two three-atom fairness disjuncts
        row = next(r for r in TABLE1 if r[0] == "cycle3")
        assert build_dgrw(row[1]).condition.index == 3 < row[3]

    @pytest.mark.parametrize("name,text,index", TABLE2)
    def test_game_formulas(self, name, text, index):
        assert build_dgrw(text).condition.index == index


class TestSuites:
    def test_fairness_suite(self, tmp_path):
        out = tmp_path / "f.csv"
        rows = run_suite("fairness", str(out), times=False)
        assert [r.B for r in rows] == [1, 2, 24, 20736]
        assert [r.dgrw_states for r in rows[:3]] == [4, 16, 64]
        table = list(csv.reader(io.StringIO(out.read_text())))
        assert table[0] == COLUMNS
        assert len(table) == 5
        assert all(row[-2:] == ["", ""] for row in table[1:])

    def test_no_times_is_reproducible(self):
        first = write_csv(run_suite("random", times=False))
        second = write_csv(run_suite("random", times=False))
        assert first == second

    def test_random_suite_rows(self):
        rows = run_suite("random", times=True)
        assert len(rows) == 2 * len(TABLE1)
        assert all(r.t_translate_ms is not None for r in rows)
        assert all(r.product_gr <= r.product_r for r in rows if r.product_r is not None)
        assert sum(r.formula.startswith("min: ") for r in rows) == 2 * sum(m == "min" for _, _, m, _ in TABLE1)

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("nope")

    @pytest.mark.slow
    def test_appendix_suite(self):
        rows = run_suite("appendixB", times=False)
        assert len(rows) == 6
        assert {r.result for r in rows} == {"player0"}
        assert [r.product_gr for r in rows[:3]] == sorted(r.product_gr for r in rows[:3])
