"""Eve's knowledge tracking and constraint automata restricting her actions."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .arena import Arena
from .strategy import FiniteMemoryStrategy

SINK = "sink"


def update_knowledge(arena: Arena, K: int, action, observation) -> int:
    """States of class ``observation`` reachable from ``K`` when Eve plays ``action``.

    ``action`` is an action name and ``observation`` an Eve class label. The
    result may be empty, meaning the observation cannot follow ``action``
    from ``K``.
    """
    a = arena.eve_action_index[action]
    return arena.post(K, a) & arena.eve_class_mask(observation)


def track_knowledge(arena: Arena, K0: int, word: Iterable[tuple]) -> list[int]:
    """Knowledge after each ``(action, observation)`` step of ``word``."""
    out = []
    K = K0
    for action, observation in word:
        K = update_knowledge(arena, K, action, observation)
        out.append(K)
    return out


@dataclass(frozen=True, eq=False)
class ConstraintAutomaton:
    """Deterministic automaton over ``(eve_action, eve_label)`` restricting Eve.

    ``trans`` is keyed by ``(q, action, label)``. ``impossible`` lists
    transitions that read an observation which cannot occur after the action
    from the knowledge ``q`` stands for; they are routed to the sink and are
    exempt from the sink-iff-disallowed requirement.
    """

    states: tuple
    initial: Hashable
    sink: Hashable
    actions: tuple
    labels: tuple
    trans: Mapping
    act: Mapping
    impossible: frozenset = field(default_factory=frozenset)

    def step(self, q, action, label):
        return self.trans[(q, action, label)]

    def violations(self) -> list[str]:
        problems = []
        for q in self.states:
            allowed = self.act.get(q, frozenset())
            if (not allowed) != (q == self.sink):
                problems.append(f"act({q!r}) = {set(allowed)} breaks empty-iff-sink")
            for a in self.actions:
                for x in self.labels:
                    key = (q, a, x)
                    nxt = self.trans.get(key)
                    if nxt is None:
                        problems.append(f"no transition at {key!r}")
                        continue
                    if key in self.impossible:
                        continue
                    if (nxt == self.sink) != (a not in allowed):
                        problems.append(f"transition {key!r} -> {nxt!r} breaks sink-iff-disallowed")
        return problems


def run_automaton(T: ConstraintAutomaton, word: Iterable[tuple]):
    q = T.initial
    for action, label in word:
        q = T.step(q, action, label)
    return q


def trivial_automaton(arena: Arena) -> ConstraintAutomaton:
    """One live state allowing every action, plus an unreachable sink."""
    q0 = "q0"
    trans = {}
    for a in arena.eve_actions:
        for x in arena.eve_labels:
            trans[(q0, a, x)] = q0
            trans[(SINK, a, x)] = SINK
    return ConstraintAutomaton(
        states=(q0, SINK), initial=q0, sink=SINK, actions=arena.eve_actions,
        labels=arena.eve_labels, trans=trans,
        act={q0: frozenset(arena.eve_actions), SINK: frozenset()})


def allowed_actions(arena: Arena, K: int, family) -> frozenset:
    """Action indices keeping every possible next knowledge inside ``family`` (or empty)."""
    out = []
    for a in range(len(arena.eve_actions)):
        post = arena.post(K, a)
        if all((post & c) == 0 or (post & c) in family for c in arena.eve_classes):
            out.append(a)
    return frozenset(out)


def knowledge_automaton(arena: Arena, family: Iterable[int], initial: int) -> ConstraintAutomaton:
    """Automaton whose compatible strategies keep Eve's knowledge inside ``family``.

    Only knowledges reachable from ``initial`` are materialized. Members from
    which no action keeps the knowledge inside the family are dropped
    (repeatedly), since visiting them would force the knowledge out anyway.
    """
    family = frozenset(family)
    reach = set()
    if initial in family:
        reach.add(initial)
        queue = deque([initial])
        while queue:
            K = queue.popleft()
            for a in range(len(arena.eve_actions)):
                post = arena.post(K, a)
                for c in arena.eve_classes:
                    nxt = post & c
                    if nxt and nxt in family and nxt not in reach:
                        reach.add(nxt)
                        queue.append(nxt)
    live = set(reach)
    act = {}
    changed = True
    while changed:
        changed = False
        for K in list(live):
            acts = allowed_actions(arena, K, live)
            if acts:
                act[K] = acts
            else:
                live.discard(K)
                changed = True
    # re-restrict to what is reachable through allowed actions
    start = initial if initial in live else SINK
    states = [SINK]
    kept = set()
    if start != SINK:
        kept.add(start)
        queue = deque([start])
        while queue:
            K = queue.popleft()
            for a in act[K]:
                post = arena.post(K, a)
                for c in arena.eve_classes:
                    nxt = post & c
                    if nxt and nxt not in kept:
                        kept.add(nxt)
                        queue.append(nxt)
        states = sorted(kept) + [SINK]
    trans = {}
    impossible = set()
    act_names = {SINK: frozenset()}
    for K in states:
        if K == SINK:
            for a in arena.eve_actions:
                for x in arena.eve_labels:
                    trans[(SINK, a, x)] = SINK
            continue
        act_names[K] = frozenset(arena.eve_actions[a] for a in act[K])
        for ai, a in enumerate(arena.eve_actions):
            post = arena.post(K, ai)
            for ci, x in enumerate(arena.eve_labels):
                if ai not in act[K]:
                    trans[(K, a, x)] = SINK
                    continue
                nxt = post & arena.eve_classes[ci]
                if nxt:
                    trans[(K, a, x)] = nxt
                else:
                    trans[(K, a, x)] = SINK
                    impossible.add((K, a, x))
    return ConstraintAutomaton(
        states=tuple(states), initial=start, sink=SINK, actions=arena.eve_actions,
        labels=arena.eve_labels, trans=trans, act=act_names, impossible=frozenset(impossible))


def is_t_compatible(arena: Arena, T: ConstraintAutomaton, strategy: FiniteMemoryStrategy,
                    starts: int, horizon: int | None = None) -> bool:
    """Whether ``strategy`` only plays allowed actions along every consistent play.

    Explores configurations ``(state, memory, automaton state)`` reachable
    from the states in ``starts`` against all Adam actions. With
    ``horizon=None`` the exploration runs to exhaustion, which is exact since
    the configuration space is finite.
    """
    frontier = []
    seen = set()
    for s in range(arena.n):
        if starts >> s & 1:
            m = strategy.update[(strategy.initial, arena.eve_label_of(s))]
            cfg = (s, m, T.initial)
            if cfg not in seen:
                seen.add(cfg)
                frontier.append(cfg)
    depth = 0
    while frontier and (horizon is None or depth < horizon):
        nxt_frontier = []
        for s, m, q in frontier:
            action = strategy.output[m]
            if action not in T.act.get(q, ()):
                return False
            a = arena.eve_action_index[action]
            for b in range(len(arena.adam_actions)):
                for t, _ in arena.delta[(s, a, b)]:
                    x = arena.eve_label_of(t)
                    cfg = (t, strategy.update[(m, x)], T.step(q, action, x))
                    if cfg not in seen:
                        seen.add(cfg)
                        nxt_frontier.append(cfg)
        frontier = nxt_frontier
        depth += 1
    return True
