"""Command-line entry point: ``genrabin <subcommand> ...``.

Exit codes: 0 success, 1 equivalence counterexample, 2 formula parse error
(or bad usage), 3 resource guard, 4 invalid model or automaton file,
5 solver or pipeline disagreement.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

from ._text import FormatError
from .automata import (
    AutomatonFormatError,
    ResourceLimitError,
    build_dgrw,
    check_equiv_bounded,
    degeneralize,
    format_letter,
    read_automaton,
    write_automaton,
)
from .bench import SuiteDisagreement, gen_appendix_arena, gen_fairness, gen_random_game, gen_random_mdp, run_suite
from .games import format_game, format_strategy, parse_game, solve_ltl_game, verify_strategy
from .ltl import FormulaError, LassoWord, parse
from .mdp import format_mdp, model_check_detailed, parse_mdp

EXIT_MISMATCH, EXIT_PARSE, EXIT_RESOURCE, EXIT_MODEL, EXIT_DISAGREE = 1, 2, 3, 4, 5


class _ModelInputError(Exception):
    pass


def _formula(args):
    if args.formula_file:
        text = _read(args.formula_file).strip()
    else:
        text = args.formula
    return parse(text)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise _ModelInputError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def format_lasso(w: LassoWord) -> str:
    pre = " ".join(format_letter(x) for x in w.prefix)
    cyc = " ".join(format_letter(x) for x in w.cycle)
    return f"prefix: {pre}\ncycle: {cyc}"


def cmd_translate(args) -> int:
    aut = build_dgrw(_formula(args))
    if args.drw:
        aut = degeneralize(aut)
    if args.out:
        _emit(write_automaton(aut), args.out)
    print(f"states={aut.n_states} pairs={len(aut.condition.pairs)} B={aut.condition.index}")
    return 0


def cmd_mc(args) -> int:
    f = _formula(args)
    m = parse_mdp(_read(args.model))
    exact = not args.epsilon
    r = model_check_detailed(m, f, args.mode, exact=exact, epsilon=args.epsilon or 1e-6, via=args.via)
    value = str(r.value) if exact else f"{r.value:.10g}"
    print(f"value={value}")
    print(f"product_states={r.product_states} automaton_states={r.automaton_states} pairs={r.pairs} B={r.index}")
    return 0


def cmd_game(args) -> int:
    f = _formula(args)
    g = parse_game(_read(args.arena))
    try:
        res = solve_ltl_game(g, f, solver=args.solver)
    except AssertionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    print(f"winner=player{res.winner}")
    if args.strategy:
        if res.strategy is None:
            print("error: strategies come from the ranking solver", file=sys.stderr)
            return EXIT_PARSE
        if not verify_strategy(res.product, res.strategy):
            print("error: extracted strategy failed verification", file=sys.stderr)
            return EXIT_DISAGREE
        _emit(format_strategy(res.strategy), args.strategy)
    return 0


def cmd_equiv(args) -> int:
    f = _formula(args)
    if args.automaton:
        try:
            aut = read_automaton(_read(args.automaton))
        except AutomatonFormatError as exc:
            raise _ModelInputError(str(exc)) from None
    else:
        aut = build_dgrw(f)
        if args.drw:
            aut = degeneralize(aut)
    cex = check_equiv_bounded(aut, f, args.bound)
    if cex is None:
        print(f"equal up to bound {args.bound}")
        return 0
    print("counterexample")
    print(format_lasso(cex))
    return EXIT_MISMATCH


def cmd_bench(args) -> int:
    def report(row):
        msg = f"{row.model}: B={row.B} result={row.result}"
        if row.t_translate_ms is not None:
            msg += f" ({row.t_translate_ms} ms translate, {row.t_solve_ms} ms solve)"
        print(msg, file=sys.stderr)

    try:
        rows = run_suite(args.suite, args.out, times=not args.no_times, progress=report)
    except SuiteDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    print(f"rows={len(rows)}")
    return 0


def cmd_gen(args) -> int:
    if args.kind == "fairness":
        text = str(gen_fairness(args.n)) + "\n"
    elif args.kind == "arena":
        text = format_game(gen_appendix_arena(args.copies))
    elif args.kind == "mdp":
        text = format_mdp(gen_random_mdp(args.seed, args.vertices, args.atoms, args.branch))
    else:
        text = format_game(gen_random_game(args.seed, args.vertices, args.atoms, args.branch))
    _emit(text, args.out)
    return 0


def _add_formula(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--formula", help="LTL(F,G) formula text")
    grp.add_argument("--formula-file", help="file holding the formula")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genrabin", description="LTL(F,G) to generalized Rabin automata, MDPs and games")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="build the automaton for a formula")
    _add_formula(p)
    p.add_argument("--drw", action="store_true", help="degeneralize to a plain Rabin automaton")
    p.add_argument("--out", help="write the automaton to this file")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("mc", help="model-check an MDP")
    p.add_argument("--model", required=True)
    _add_formula(p)
    p.add_argument("--mode", choices=("max", "min"), default="max")
    acc = p.add_mutually_exclusive_group()
    acc.add_argument("--exact", action="store_true", help="rational arithmetic (default)")
    acc.add_argument("--epsilon", type=float, help="value iteration with this stopping threshold")
    p.add_argument("--via", choices=("dgrw", "drw"), default="dgrw")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("game", help="solve an LTL game")
    p.add_argument("--arena", required=True)
    _add_formula(p)
    p.add_argument("--solver", choices=("ranking", "symbolic", "both"), default="ranking")
    p.add_argument("--strategy", help="write the verified strategy here")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("equiv", help="bounded language-equivalence check")
    _add_formula(p)
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--automaton", help="check this automaton file instead of a fresh translation")
    p.add_argument("--drw", action="store_true")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("--suite", choices=("fairness", "appendixB", "random"), required=True)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--no-times", action="store_true", help="leave the timing columns empty")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate benchmark inputs")
    p.add_argument("kind", choices=("fairness", "arena", "mdp", "game"))
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--copies", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--vertices", type=int, default=6)
    p.add_argument("--atoms", type=int, default=2)
    p.add_argument("--branch", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except FormulaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (FormatError, _ModelInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(f"time: {(time.perf_counter() - t0) * 1000:.1f} ms", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
