"""Pure-strategy solver for concurrent stochastic games with imperfect information."""
from .arena import (Arena, InfoOrdering, InvalidArena, Objective, ObjectiveKind, info_ordering,
                    make_arena, support, validate_arena)
from .buchi_as import (AlmostSureResult, almost_sure_buchi, assemble_as_strategy,
                       reachability_to_buchi, xi_step)
from .corpus import corpus_names, load_corpus
from .errors import BudgetExceeded, Unsupported
from .gamefile import GameFile, dumps_game, load_game, load_strategy, loads_game, save_game
from .knowledge import (ConstraintAutomaton, knowledge_automaton, track_knowledge,
                        trivial_automaton, update_knowledge)
from .oracle import (brute_force_eve, fix_eve_build_mdp, markov_chain_reach_prob,
                     min_buchi_over_adam, min_reach_over_adam)
from .positive_reach import (RankedFamily, more_informed_reduction, positive_reach_tcompatible,
                             reach_fixpoint, strategy_from_ranks)
from .strategy import FiniteMemoryStrategy, estimate_objective, simulate, step_strategy

__all__ = [
    "Arena", "InfoOrdering", "InvalidArena", "Objective", "ObjectiveKind", "info_ordering",
    "make_arena", "support", "validate_arena", "AlmostSureResult", "almost_sure_buchi",
    "assemble_as_strategy", "reachability_to_buchi", "xi_step", "BudgetExceeded", "Unsupported",
    "ConstraintAutomaton", "knowledge_automaton", "track_knowledge", "trivial_automaton",
    "update_knowledge", "RankedFamily", "more_informed_reduction", "positive_reach_tcompatible",
    "reach_fixpoint", "strategy_from_ranks", "FiniteMemoryStrategy", "estimate_objective",
    "simulate", "step_strategy", "corpus_names", "load_corpus", "GameFile", "dumps_game",
    "load_game", "load_strategy", "loads_game", "save_game", "brute_force_eve",
    "fix_eve_build_mdp", "markov_chain_reach_prob", "min_buchi_over_adam", "min_reach_over_adam",
]
