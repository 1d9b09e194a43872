"""Almost-sure Büchi (and reachability) for pure strategies.

The winning knowledges are the greatest family in which every member can
positively reach the final states while keeping the knowledge inside the
family. The witness strategy plays in rounds: at the start of each round it
picks the positive-reachability strategy stored for the current knowledge
and follows it for a fixed number of moves.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .arena import Arena, InfoOrdering, info_ordering, iter_bits, with_transitions
from .errors import Unsupported
from .knowledge import knowledge_automaton, update_knowledge
from .positive_reach import positive_reach_tcompatible
from .strategy import FiniteMemoryStrategy


def _solve_members(arena: Arena, final: int, family, reduce: bool = False) -> dict:
    family = frozenset(family)
    return {K: positive_reach_tcompatible(arena, knowledge_automaton(arena, family, K), K, final,
                                          reduce=reduce)
            for K in sorted(family)}


def xi_step(arena: Arena, final: int, family, reduce: bool = False) -> frozenset:
    """Members of ``family`` that positively reach ``final`` without leaving the family."""
    results = _solve_members(arena, final, family, reduce)
    return frozenset(K for K, r in results.items() if r.winning)


@dataclass(eq=False)
class AlmostSureResult:
    winning: bool
    winning_knowledges: frozenset
    strategies: dict = field(default_factory=dict)
    horizon: int = 1
    strategy: Optional[FiniteMemoryStrategy] = None
    history: list = field(default_factory=list)


def almost_sure_buchi(arena: Arena, final: int, K0: int, reduce: bool = False) -> AlmostSureResult:
    """Decide whether Eve wins Büchi(``final``) almost surely from knowledge ``K0``.

    ``history`` records the family at every iteration, starting from all
    knowledges; ``strategies`` maps each winning knowledge to its
    positive-reachability strategy and horizon.
    """
    if info_ordering(arena) is InfoOrdering.OTHER:
        raise Unsupported("no procedure when Adam is not more informed than Eve")
    arena.check_knowledge(K0)
    family = frozenset(arena.knowledges())
    history = [family]
    while True:
        results = _solve_members(arena, final, family, reduce)
        nxt = frozenset(K for K, r in results.items() if r.winning)
        history.append(nxt)
        if nxt == family:
            break
        family = nxt
    strategies = {K: (r.strategy, r.horizon) for K, r in results.items()}
    horizon = max([1] + [h for _, h in strategies.values()])
    winning = K0 in family
    strategy = assemble_as_strategy(arena, strategies, horizon, K0) if winning else None
    return AlmostSureResult(winning, family, strategies, horizon, strategy, history)


def reachability_to_buchi(arena: Arena, final: int) -> Arena:
    """Same arena with every final state made absorbing."""
    delta = dict(arena.delta)
    for s in iter_bits(final):
        for a in range(len(arena.eve_actions)):
            for b in range(len(arena.adam_actions)):
                delta[(s, a, b)] = ((s, Fraction(1)),)
    return with_transitions(arena, delta)


def assemble_as_strategy(arena: Arena, strategies: Mapping, horizon: int,
                         K0: int) -> FiniteMemoryStrategy:
    """Round-based combination of per-knowledge strategies.

    Memory is ``(knowledge, phase, round start knowledge, inner memory)``.
    A round starts with the strategy stored for the current knowledge and
    lasts ``horizon`` moves. Raises ``ValueError`` if a round would start
    in a knowledge without a stored strategy.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    start, dead = "start", "dead"
    first = arena.eve_actions[0]

    def begin(H, x):
        if H not in strategies:
            raise ValueError(f"no strategy stored for knowledge {sorted(map(str, arena.names(H)))}")
        phi = strategies[H][0]
        return (H, 0, H, phi.update[(phi.initial, x)])

    def nxt(mem, x):
        if mem == dead:
            return dead
        if mem == start:
            H = K0 & arena.eve_class_mask(x)
            return begin(H, x) if H else dead
        H, phase, R, m = mem
        phi = strategies[R][0]
        H2 = update_knowledge(arena, H, phi.output[m], x)
        if H2 == 0:
            return dead
        if phase + 1 >= horizon:
            return begin(H2, x)
        return (H2, phase + 1, R, phi.update[(m, x)])

    output = {start: first, dead: first}
    update = {}
    memory = [start, dead]
    queue = deque([start, dead])
    while queue:
        mem = queue.popleft()
        for x in arena.eve_labels:
            m2 = nxt(mem, x)
            update[(mem, x)] = m2
            if m2 not in output:
                output[m2] = strategies[m2[2]][0].output[m2[3]]
                memory.append(m2)
                queue.append(m2)
    return FiniteMemoryStrategy(tuple(memory), start, output, update)
