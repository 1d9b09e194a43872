"""Command-line interface: ``purestrat validate|solve|verify|corpus``.

Exit codes: 0 success / yes, 1 no, 2 invalid input, 3 unsupported
information ordering, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .arena import InfoOrdering, InvalidArena, Objective, ObjectiveKind, info_ordering
from .buchi_as import almost_sure_buchi, reachability_to_buchi
from .corpus import corpus_names, load_corpus
from .errors import BudgetExceeded, Unsupported
from .gamefile import dumps_game, dumps_strategy, load_game, load_strategy
from .knowledge import trivial_automaton
from .oracle import (adam_strategy_from_policy, fix_eve_build_mdp, min_buchi_over_adam,
                     min_reach_over_adam)
from .positive_reach import more_informed_reduction, positive_reach_tcompatible
from .strategy import estimate_objective

OK, NO, INVALID, UNSUPPORTED, BUDGET = 0, 1, 2, 3, 4
OBJECTIVES = ("positive-reach", "as-buchi", "as-reach")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(INVALID)


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _start_mask(game, text):
    arena = game.arena
    names = [s.strip() for s in text.split(",") if s.strip()] if text else game.start
    if not names:
        raise InvalidArena(["no start knowledge: pass --start or add one to the game file"])
    unknown = [s for s in names if s not in arena.state_index]
    if unknown:
        raise InvalidArena([f"unknown start state {s!r}" for s in unknown])
    mask = arena.mask(names)
    if not arena.is_knowledge(mask):
        raise InvalidArena(["start knowledge is not a subset of one Eve class"])
    return mask


def cmd_validate(args) -> int:
    game = load_game(args.path)
    arena = game.arena
    print(f"valid; {info_ordering(arena).value}; {game.objective.kind.value}; |S|={arena.n}")
    return OK


def cmd_solve(args) -> int:
    game = load_game(args.path)
    arena = game.arena
    K = _start_mask(game, args.start)
    final = arena.mask(game.objective.final)
    if info_ordering(arena) is InfoOrdering.OTHER:
        return _fail(UNSUPPORTED, "unsupported: Adam is not more informed than Eve")
    if args.objective == "positive-reach":
        res = positive_reach_tcompatible(arena, trivial_automaton(arena), K, final)
        winning, strategy = res.winning, res.strategy
        detail = f"horizon {res.horizon}" if winning else ""
    else:
        target = reachability_to_buchi(arena, final) if args.objective == "as-reach" else arena
        res = almost_sure_buchi(target, final, K)
        winning, strategy = res.winning, res.strategy
        rounds = len(res.history) - 1
        detail = (f"{len(res.winning_knowledges)} winning knowledges, "
                  f"{rounds} iteration{'s' if rounds != 1 else ''}, round length {res.horizon}")
    print(("yes" if winning else "no") + (f" ({detail})" if detail else ""))
    if winning and args.emit_strategy:
        compact = strategy.compact()
        Path(args.emit_strategy).write_text(dumps_strategy(compact))
        print(f"strategy with {len(compact)} memory states written to {args.emit_strategy}")
    return OK if winning else NO


def _verification_arena(arena, final, K):
    """Arena in which Adam is perfectly informed, plus matching final and start sets."""
    if info_ordering(arena) is InfoOrdering.ADAM_MORE_INFORMED:
        red = more_informed_reduction(arena, final, K)
        return red.arena, red.final, red.initial
    return arena, final, K


def cmd_verify(args) -> int:
    game = load_game(args.game)
    strategy = load_strategy(args.strategy).totalize(game.arena.eve_labels)
    arena = game.arena
    K = _start_mask(game, args.start)
    final = arena.mask(game.objective.final)
    if info_ordering(arena) is InfoOrdering.OTHER:
        return _fail(UNSUPPORTED, "unsupported: Adam is not more informed than Eve")
    buchi = args.objective == "as-buchi"
    if args.mode == "oracle":
        varena, vfinal, vK = _verification_arena(arena, final, K)
        mdp = fix_eve_build_mdp(varena, strategy, vK, vfinal)
        if buchi:
            value, _ = min_buchi_over_adam(mdp, method=args.method, budget=args.budget)
            print(f"min buchi probability = {value}")
        else:
            value, _ = min_reach_over_adam(mdp, method=args.method, budget=args.budget)
            print(f"min reach probability = {value}")
            if args.horizon is not None:
                bounded, _ = min_reach_over_adam(mdp, horizon=args.horizon)
                print(f"min reach probability within {args.horizon} steps = {bounded}")
        return OK
    if args.adam_strategy:
        adam = load_strategy(args.adam_strategy).totalize(arena.adam_labels)
    else:
        mdp = fix_eve_build_mdp(arena, strategy, K, final)
        policy = (min_buchi_over_adam(mdp) if buchi else min_reach_over_adam(mdp))[1]
        adam = adam_strategy_from_policy(mdp, policy)
    start = args.start_state or arena.sorted_names(K)[0]
    if start not in arena.state_index or not (K >> arena.state_index[start] & 1):
        return _fail(INVALID, f"start state {start!r} is not in the start knowledge")
    kind = ObjectiveKind.BUCHI if buchi else ObjectiveKind.REACHABILITY
    horizon = args.horizon if args.horizon is not None else 100
    freq = estimate_objective(arena, strategy, adam, start, Objective(kind, game.objective.final),
                              args.runs, horizon, args.seed)
    print(f"empirical frequency = {freq:.4f} ({args.runs} runs, horizon {horizon}, seed {args.seed})")
    return OK


def cmd_corpus(args) -> int:
    if args.action == "list":
        for name in corpus_names():
            print(name)
        return OK
    if not args.name:
        return _fail(INVALID, "corpus emit needs an instance name")
    try:
        text = dumps_game(load_corpus(args.name))
    except KeyError as exc:
        return _fail(INVALID, str(exc.args[0]))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="purestrat", description=__doc__.splitlines()[0])
    parser.add_argument("--budget", type=int, default=None,
                        help="enumeration budget (default: $PURESTRAT_BUDGET or 10^6)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a game file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="decide a qualitative objective")
    p.add_argument("path")
    p.add_argument("--objective", choices=OBJECTIVES, required=True)
    p.add_argument("--start", help="comma-separated start knowledge")
    p.add_argument("--emit-strategy", metavar="OUT")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check an Eve strategy exactly or by simulation")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--objective", choices=OBJECTIVES, required=True)
    p.add_argument("--mode", choices=("oracle", "simulate"), default="oracle")
    p.add_argument("--method", choices=("policy", "enumerate"), default="policy",
                   help="oracle mode: policy iteration, or enumerate every memoryless Adam strategy")
    p.add_argument("--runs", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int)
    p.add_argument("--start", help="comma-separated start knowledge")
    p.add_argument("--start-state", help="state to simulate from (default: first of the start)")
    p.add_argument("--adam-strategy", metavar="PATH")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", help="list or emit built-in games")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidArena as exc:
        return _fail(INVALID, "invalid: " + "; ".join(exc.errors))
    except (OSError, ValueError) as exc:
        return _fail(INVALID, f"error: {exc}")
    except Unsupported as exc:
        return _fail(UNSUPPORTED, f"unsupported: {exc}")
    except BudgetExceeded as exc:
        return _fail(BUDGET, f"budget exceeded: {exc}")


if __name__ == "__main__":
    raise SystemExit(main())
