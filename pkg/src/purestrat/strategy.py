"""Pure observation-based finite-memory strategies and seeded simulation.

A strategy is a Moore machine that reads the observation sequence of a
partial play and outputs the next action: starting from ``initial`` it
reads the observation of the current state (``update``) and then emits
``output`` of the memory it landed in. The first observation read is the
one of the start state.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .arena import Arena, Objective, ObjectiveKind, final_mask


@dataclass(frozen=True, eq=False)
class FiniteMemoryStrategy:
    """Moore machine over observation labels.

    ``update`` is keyed by ``(memory, label)``. The machine is observation
    based by construction since it never sees states.
    """

    memory: tuple
    initial: Hashable
    output: Mapping
    update: Mapping

    def __post_init__(self):
        object.__setattr__(self, "memory", tuple(self.memory))
        object.__setattr__(self, "output", dict(self.output))
        object.__setattr__(self, "update", dict(self.update))

    def __eq__(self, other):
        if not isinstance(other, FiniteMemoryStrategy):
            return NotImplemented
        return (self.memory == other.memory and self.initial == other.initial
                and self.output == other.output and self.update == other.update)

    __hash__ = None

    def __len__(self):
        return len(self.memory)

    @property
    def labels(self) -> frozenset:
        return frozenset(x for _, x in self.update)

    def missing(self, labels: Iterable) -> list[str]:
        """Problems preventing this machine from being total over ``labels``."""
        problems = []
        mem = set(self.memory)
        if self.initial not in mem:
            problems.append(f"initial memory {self.initial!r} not in memory set")
        for m in self.memory:
            if m not in self.output:
                problems.append(f"no output at memory {m!r}")
            for x in labels:
                nxt = self.update.get((m, x))
                if nxt is None:
                    problems.append(f"no update at ({m!r}, {x!r})")
                elif nxt not in mem:
                    problems.append(f"update at ({m!r}, {x!r}) leaves memory set")
        return problems

    def run(self, observations: Iterable) -> list:
        """Actions emitted along a sequence of observations."""
        m = self.initial
        out = []
        for x in observations:
            a, m = step_strategy(self, m, x)
            out.append(a)
        return out

    def compact(self) -> "FiniteMemoryStrategy":
        """Equivalent machine on reachable memory, renamed ``m0, m1, ...`` in BFS order."""
        labels = sorted({x for _, x in self.update}, key=repr)
        order = {self.initial: 0}
        queue = deque([self.initial])
        while queue:
            m = queue.popleft()
            for x in labels:
                nxt = self.update[(m, x)]
                if nxt not in order:
                    order[nxt] = len(order)
                    queue.append(nxt)
        name = {m: f"m{i}" for m, i in order.items()}
        return FiniteMemoryStrategy(
            memory=tuple(name[m] for m in order),
            initial=name[self.initial],
            output={name[m]: self.output[m] for m in order},
            update={(name[m], x): name[self.update[(m, x)]] for m in order for x in labels},
        )

    def totalize(self, labels: Iterable) -> "FiniteMemoryStrategy":
        """Add self-loop updates for labels the machine never reads."""
        update = dict(self.update)
        for m in self.memory:
            for x in labels:
                update.setdefault((m, x), m)
        return FiniteMemoryStrategy(self.memory, self.initial, self.output, update)


# Adam strategies have the same shape, read over Adam observation labels.
AdamStrategy = FiniteMemoryStrategy


def step_strategy(strategy: FiniteMemoryStrategy, m, observation):
    """Read one observation from memory ``m``; return ``(action, next_memory)``."""
    nxt = strategy.update[(m, observation)]
    return strategy.output[nxt], nxt


def constant_strategy(action, labels: Iterable) -> FiniteMemoryStrategy:
    return FiniteMemoryStrategy(("c",), "c", {"c": action}, {("c", x): "c" for x in labels})


def knowledge_strategy(arena: Arena, initial_knowledge: int,
                       choose: Callable[[int], Hashable]) -> FiniteMemoryStrategy:
    """Strategy whose action depends on Eve's current knowledge alone.

    Memory is the tracked knowledge (bitmask); ``choose`` maps a knowledge
    to an action name. Impossible observations lead to a dead memory.
    """
    dead = "dead"
    start = "start"
    output = {start: arena.eve_actions[0], dead: arena.eve_actions[0]}
    update = {}
    memory = [start, dead]
    seen = set()
    queue = deque()

    def visit(K):
        if K not in seen:
            seen.add(K)
            memory.append(K)
            output[K] = choose(K)
            queue.append(K)

    for ci, x in enumerate(arena.eve_labels):
        K = initial_knowledge & arena.eve_classes[ci]
        if K:
            update[(start, x)] = K
            visit(K)
        else:
            update[(start, x)] = dead
        update[(dead, x)] = dead
    while queue:
        K = queue.popleft()
        a = arena.eve_action_index[output[K]]
        post = arena.post(K, a)
        for ci, x in enumerate(arena.eve_labels):
            nxt = post & arena.eve_classes[ci]
            if nxt:
                update[(K, x)] = nxt
                visit(nxt)
            else:
                update[(K, x)] = dead
    return FiniteMemoryStrategy(tuple(memory), start, output, update)


@dataclass
class PlayRecord:
    """Finite prefix of a play: ``states[i]`` is followed by ``(eve[i], adam[i])``."""

    states: list
    eve_actions: list
    adam_actions: list
    final_visits: list = field(default_factory=list)

    @property
    def terminal(self):
        return self.states[-1]

    def __len__(self):
        return len(self.eve_actions)


def rng_for(seed: int, run: int = 0) -> np.random.Generator:
    """PCG64 stream derived from ``(seed, run)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & (2**64 - 1), run])))


_UNIT = 2**53


def _sample(dist, rng: np.random.Generator) -> int:
    u = Fraction(int(rng.integers(0, _UNIT)), _UNIT)
    acc = Fraction(0)
    for t, p in dist:
        acc += p
        if u < acc:
            return t
    return dist[-1][0]


def simulate(arena: Arena, eve_strategy: FiniteMemoryStrategy, adam_strategy: FiniteMemoryStrategy,
             start, max_steps: int, seed: int, final=frozenset(), run: int = 0) -> PlayRecord:
    """Sample one play prefix of ``max_steps`` rounds."""
    s = arena.state_index[start]
    fmask = final_mask(arena, final)
    rng = rng_for(seed, run)
    me, ma = eve_strategy.initial, adam_strategy.initial
    states, eve, adam, visits = [arena.states[s]], [], [], []
    for i in range(max_steps + 1):
        if fmask >> s & 1:
            visits.append(i)
        if i == max_steps:
            break
        ae, me = step_strategy(eve_strategy, me, arena.eve_label_of(s))
        aa, ma = step_strategy(adam_strategy, ma, arena.adam_label_of(s))
        ai, bi = arena.eve_action_index[ae], arena.adam_action_index[aa]
        t = _sample(arena.delta[(s, ai, bi)], rng)
        assert arena.succ[s][ai][bi] >> t & 1
        eve.append(ae)
        adam.append(aa)
        s = t
        states.append(arena.states[s])
    return PlayRecord(states, eve, adam, visits)


def play_satisfies(record: PlayRecord, kind: ObjectiveKind, horizon: int) -> bool:
    """Objective check on a finite prefix.

    Büchi and co-Büchi are approximated by looking at the second half of the
    prefix only (visit after ``horizon // 2`` / no visit after it).
    """
    kind = ObjectiveKind(kind)
    if kind is ObjectiveKind.REACHABILITY:
        return bool(record.final_visits)
    if kind is ObjectiveKind.SAFETY:
        return not record.final_visits
    late = any(i > horizon // 2 for i in record.final_visits)
    return late if kind is ObjectiveKind.BUCHI else not late


def estimate_objective(arena: Arena, eve_strategy, adam_strategy, start, objective: Objective,
                       runs: int, horizon: int, seed: int) -> float:
    """Fraction of ``runs`` sampled plays satisfying ``objective`` within ``horizon`` rounds."""
    if runs < 1:
        raise ValueError("runs must be positive")
    wins = 0
    for r in range(runs):
        rec = simulate(arena, eve_strategy, adam_strategy, start, horizon, seed,
                       final=objective.final, run=r)
        wins += play_satisfies(rec, objective.kind, horizon)
    return wins / runs
