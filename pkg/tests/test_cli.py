import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from genrabin import cli, games
from genrabin.bench import gen_appendix_arena, gen_random_mdp
from genrabin.games import format_game
from genrabin.mdp import format_mdp

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def arena(tmp_path):
    p = tmp_path / "arena1.game"
    p.write_text(format_game(gen_appendix_arena(1)))
    return p


class TestTranslate:
    def test_example(self, capsys):
        code, out, err = run(capsys, "translate", "--formula", "F a | G b")
        assert code == 0 and out == "states=3 pairs=1 B=1\n"
        assert err.startswith("time: ")

    def test_fairness_and_drw(self, capsys, tmp_path):
        f = tmp_path / "f.ltl"
        f.write_text("(F G a | G F b) & (F G c | G F d) & (F G e | G F f)\n")
        assert run(capsys, "translate", "--formula-file", f)[1] == "states=64 pairs=8 B=24\n"
        code, out, _ = run(capsys, "translate", "--formula", "G F a & G F !a", "--drw", "--out", tmp_path / "a.txt")
        assert out.startswith("states=4 ")
        assert (tmp_path / "a.txt").read_text().startswith("drw\n")

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "translate", "--formula", "a U b")
        assert code == 2 and "error" in err

    def test_resource_guard(self, capsys):
        text = " & ".join(f"G F x{i}" for i in range(11))
        assert run(capsys, "translate", "--formula", text)[0] == 3

    def test_formula_sources_exclusive(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(["translate", "--formula", "a", "--formula-file", str(tmp_path / "x")])
        assert exc.value.code == 2


class TestMc:
    def test_fixture(self, capsys):
        args = ["mc", "--model", FIXTURES / "regression1.mdp", "--formula-file", FIXTURES / "regression1.ltl"]
        code, out, _ = run(capsys, *args)
        assert code == 0 and out.splitlines()[0] == "value=8/15"
        assert run(capsys, *args, "--mode", "min")[1].splitlines()[0] == "value=0"
        assert run(capsys, *args, "--via", "drw")[1].splitlines()[0] == "value=8/15"
        approx = float(run(capsys, *args, "--epsilon", "1e-9")[1].splitlines()[0].split("=")[1])
        assert abs(approx - 8 / 15) <= 1e-6

    def test_bad_model(self, capsys, tmp_path):
        p = tmp_path / "bad.mdp"
        p.write_text(format_mdp(gen_random_mdp(1)).replace("states: 6", "states: 9"))
        assert run(capsys, "mc", "--model", p, "--formula", "G F a")[0] == 4

    def test_missing_model(self, capsys, tmp_path):
        assert run(capsys, "mc", "--model", tmp_path / "none.mdp", "--formula", "G F a")[0] == 4


class TestGame:
    def test_arena(self, capsys, arena, tmp_path):
        f = "(G F a & G F b & G F c) | (G F !a & G F !b & G F !c)"
        strat = tmp_path / "s.txt"
        code, out, _ = run(capsys, "game", "--arena", arena, "--formula", f, "--solver", "both", "--strategy", strat)
        assert code == 0 and out == "winner=player0\n"
        assert strat.read_text().startswith("memory: ")

    def test_disagreement_exit(self, capsys, arena, monkeypatch):
        monkeypatch.setattr(games, "solve_symbolic", lambda gg: frozenset())
        assert run(capsys, "game", "--arena", arena, "--formula", "G F a | G F !a", "--solver", "both")[0] == 5

    def test_bad_arena(self, capsys, tmp_path):
        p = tmp_path / "g.game"
        p.write_text("game\nstates: 1\ninit: 0\nplayer0: 0\nplayer1:\nedge 0 3\n")
        assert run(capsys, "game", "--arena", p, "--formula", "G F a")[0] == 4


class TestEquiv:
    def test_pass(self, capsys):
        code, out, _ = run(capsys, "equiv", "--formula", "G (a | F b)", "--bound", "3", "--drw")
        assert code == 0 and out == "equal up to bound 3\n"

    def test_corrupted_automaton(self, capsys, tmp_path):
        p = tmp_path / "a.txt"
        run(capsys, "translate", "--formula", "F a | G b", "--out", p)
        p.write_text(p.read_text().replace("trans 0 {} 1", "trans 0 {} 2"))
        code, out, _ = run(capsys, "equiv", "--formula", "F a | G b", "--automaton", p, "--bound", "2")
        assert code == 1
        lines = out.splitlines()
        assert lines[0] == "counterexample" and lines[1].startswith("prefix:") and lines[2].startswith("cycle:")

    def test_malformed_automaton(self, capsys, tmp_path):
        p = tmp_path / "a.txt"
        p.write_text("dgrw\nnonsense\n")
        assert run(capsys, "equiv", "--formula", "a", "--automaton", p)[0] == 4


class TestBenchAndGen:
    def test_bench_fairness(self, capsys, tmp_path):
        out = tmp_path / "f.csv"
        code, text, _ = run(capsys, "bench", "--suite", "fairness", "--out", out, "--no-times")
        assert code == 0 and text == "rows=4\n"
        rows = out.read_text().splitlines()
        assert rows[0].startswith("formula,model,dgrw_states,k,B,")
        assert ",24," in rows[3]

    @pytest.mark.parametrize("kind,first", [("fairness", "F G a"), ("arena", "game"), ("mdp", "mdp"), ("game", "game")])
    def test_gen(self, capsys, kind, first):
        code, out, _ = run(capsys, "gen", kind, "--n", "1")
        assert code == 0 and out.startswith(first)

    def test_gen_bad_n(self, capsys):
        assert run(capsys, "gen", "fairness", "--n", "9")[0] == 2

    def test_gen_is_deterministic(self, capsys):
        assert run(capsys, "gen", "mdp", "--seed", "4")[1] == run(capsys, "gen", "mdp", "--seed", "4")[1]


def test_module_entry_point():
    exe = [sys.executable, "-m", "genrabin.cli"]
    res = subprocess.run([*exe, "translate", "--formula", "G F a"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "states=2 pairs=1 B=1\n"


@pytest.mark.skipif(shutil.which("genrabin") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["genrabin", "translate", "--formula", "x"], capture_output=True, text=True)
    assert res.returncode == 0
