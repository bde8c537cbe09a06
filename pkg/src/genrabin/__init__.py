"""LTL(F,G) to deterministic generalized Rabin automata, with MDP model
checking and generalized Rabin games built on top."""

from .automata import (
    Automaton,
    DgrwAutomaton,
    GrpCondition,
    GrpPair,
    RabinAutomaton,
    ResourceLimitError,
    build_dgrw,
    check_equiv_bounded,
    degeneralization_index,
    degeneralize,
    progress,
    read_automaton,
    write_automaton,
)
from .games import (
    Game,
    GrpGame,
    Strategy,
    degeneralized_game,
    format_game,
    game_product,
    parse_game,
    solve_ltl_game,
    solve_ranking,
    solve_symbolic,
    verify_strategy,
)
from .ltl import Formula, LassoWord, canonicalize, eval_lasso, negate, parse
from .mdp import Mdp, format_mdp, mec_decomposition, model_check, parse_mdp, product

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "DgrwAutomaton",
    "Formula",
    "Game",
    "GrpCondition",
    "GrpGame",
    "GrpPair",
    "LassoWord",
    "Mdp",
    "RabinAutomaton",
    "ResourceLimitError",
    "Strategy",
    "build_dgrw",
    "canonicalize",
    "check_equiv_bounded",
    "degeneralization_index",
    "degeneralize",
    "degeneralized_game",
    "eval_lasso",
    "format_game",
    "format_mdp",
    "game_product",
    "mec_decomposition",
    "model_check",
    "negate",
    "parse",
    "parse_game",
    "parse_mdp",
    "product",
    "progress",
    "read_automaton",
    "solve_ltl_game",
    "solve_ranking",
    "solve_symbolic",
    "verify_strategy",
    "write_automaton",
]
