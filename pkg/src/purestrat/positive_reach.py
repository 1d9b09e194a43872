"""Pure positive winning for reachability.

The core is a least fixpoint over sets of states ranked by the number of
moves Eve needs to reach the final states with positive probability
(:func:`reach_fixpoint`). Constraint automata are handled by two product
constructions around it, and the case where Adam is more informed than Eve
is reduced to the perfectly informed one.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arena import Arena, InfoOrdering, info_ordering, iter_bits, submasks
from .errors import Unsupported
from .knowledge import SINK, ConstraintAutomaton, allowed_actions
from .strategy import FiniteMemoryStrategy

INIT, DONE, DEAD = "init", "done", "dead"


@dataclass(eq=False)
class RankedFamily:
    """Downward-closed family of state sets with minimal ranks.

    ``levels[i][c]`` is the antichain of maximal subsets of Eve class ``c``
    with rank at most ``i``; the family is their downward closure. A set
    spanning several classes has the largest rank of its per-class parts
    (and is absent if one part is). ``witnesses[(i, G)]`` is the
    ``(action index, successor set)`` that put the maximal set ``G`` at
    level ``i``.
    """

    arena: Arena
    final: int
    levels: list
    witnesses: dict
    _cache: dict = field(default_factory=dict, repr=False)

    def _class_rank(self, ci: int, part: int) -> Optional[int]:
        key = ("rank", part)
        if key not in self._cache:
            self._cache[key] = next(
                (i for i, level in enumerate(self.levels)
                 if any(part & ~G == 0 for G in level[ci])), None)
        return self._cache[key]

    def rank(self, K: int) -> Optional[int]:
        r = 0
        for ci, c in enumerate(self.arena.eve_classes):
            part = K & c
            if part:
                pr = self._class_rank(ci, part)
                if pr is None:
                    return None
                r = max(r, pr)
        return r

    def __contains__(self, K: int) -> bool:
        return self.rank(K) is not None

    @property
    def max_rank(self) -> int:
        return len(self.levels) - 1

    def witness(self, K: int) -> Optional[tuple[int, int]]:
        """``(action index, successor set)`` lowering the rank of intra-class ``K`` by one.

        The successor set is trimmed to successors of the non-final states
        of ``K``. ``None`` for rank 0.
        """
        r = self.rank(K)
        if not r:
            return None
        ci = self.arena.eve_class_of[(K & -K).bit_length() - 1]
        G = next(G for G in self.levels[r][ci] if K & ~G == 0)
        a, nxt = self.witnesses[(r, G)]
        cover = 0
        for s in iter_bits(K & ~self.final):
            for b in range(len(self.arena.adam_actions)):
                cover |= self.arena.succ[s][a][b]
        return a, nxt & cover

    def members(self):
        """Every ranked intra-class set with its rank (exponential; for checks)."""
        for ci, c in enumerate(self.arena.eve_classes):
            for K in submasks(c):
                r = self._class_rank(ci, K)
                if r is not None:
                    yield K, r

    @property
    def ranks(self) -> dict:
        return dict(self.members())

    def violations(self) -> list[str]:
        """Structural checks: downward closure, rank-0 iff final, witness validity."""
        arena, problems = self.arena, []
        for K, r in self.members():
            if (r == 0) != (K & ~self.final == 0):
                problems.append(f"rank {r} for {K:#b} contradicts final set")
            for sub in submasks(K):
                rs = self.rank(sub)
                if rs is None or rs > r:
                    problems.append(f"subset {sub:#b} of {K:#b} missing or ranked higher")
                    break
            if r > 0:
                a, nxt = self.witness(K)
                if self.rank(nxt) != r - 1:
                    problems.append(f"witness of {K:#b} has rank {self.rank(nxt)} != {r - 1}")
                for s in iter_bits(K & ~self.final):
                    for b in range(len(arena.adam_actions)):
                        if arena.succ[s][a][b] & nxt == 0:
                            problems.append(f"witness of {K:#b} misses a successor of state {s}")
        for i in range(1, len(self.levels)):
            for ci, level in enumerate(self.levels[i - 1]):
                if not all(any(G & ~H == 0 for H in self.levels[i][ci]) for G in level):
                    problems.append(f"level {i} does not contain level {i - 1}")
        return problems


def _maximal(sets) -> list[int]:
    out = []
    for K in sorted(set(sets), key=lambda m: (-bin(m).count("1"), m)):
        if not any(K & ~M == 0 for M in out):
            out.append(K)
    return out


def reach_fixpoint(arena: Arena, final: int) -> RankedFamily:
    """Rank the subsets of each Eve class from which Eve positively reaches ``final``.

    A set ``K`` gets rank ``i + 1`` when some action makes every successor
    support of every non-final state of ``K`` (for every Adam action) meet a
    single set of rank at most ``i``. Levels are kept as antichains of
    maximal sets: for an action and a choice of one maximal set per class
    reachable under it, the states whose supports all meet the chosen union
    form the next maximal candidates. Only the zero pattern of the
    transition function is consulted.
    """
    classes = arena.eve_classes
    n_a = len(arena.adam_actions)
    levels = [tuple((c & final,) if c & final else () for c in classes)]
    witnesses = {}
    while True:
        prev = levels[-1]
        nxt = []
        for ci, c in enumerate(classes):
            base = c & final
            found = {base: None} if base else {}
            for a in range(len(arena.eve_actions)):
                post = arena.post(c & ~final, a)
                options = [_maximal(M & post for M in prev[ti]) or [0]
                           for ti, t in enumerate(classes) if t & post]
                for combo in itertools.product(*options):
                    K_next = 0
                    for M in combo:
                        K_next |= M
                    good = base
                    for s in iter_bits(c & ~final):
                        if all(arena.succ[s][a][b] & K_next for b in range(n_a)):
                            good |= 1 << s
                    if good and good not in found:
                        found[good] = (a, K_next)
            maxima = tuple(sorted(_maximal(found)))
            for G in maxima:
                if found[G] is not None:
                    witnesses[(len(levels), G)] = found[G]
            nxt.append(maxima)
        nxt = tuple(nxt)
        if nxt == prev:
            break
        levels.append(nxt)
    return RankedFamily(arena, final, levels, witnesses)


def strategy_from_ranks(arena: Arena, family: RankedFamily, K: int) -> FiniteMemoryStrategy:
    """Finite-memory strategy following ranks downward from ``K``.

    Memory is ``init``, the ranked sets themselves, ``done`` once the tracked
    set lies inside the final states and ``dead`` when the observation leaves
    the tracked set. Unforced choices use the first Eve action.
    """
    if K == 0 or family.rank(K) is None:
        raise ValueError(f"{sorted(map(str, arena.names(K)))} is not in the ranked family")
    first = arena.eve_actions[0]

    def enter(part):
        if part == 0:
            return DEAD
        return DONE if family.rank(part) == 0 else part

    output = {INIT: first, DONE: first, DEAD: first}
    update = {}
    memory = [INIT, DONE, DEAD]
    for ci, x in enumerate(arena.eve_labels):
        update[(DONE, x)] = DONE
        update[(DEAD, x)] = DEAD
    queue = deque()
    seen = set()

    def visit(m):
        if isinstance(m, int) and m not in seen:
            seen.add(m)
            memory.append(m)
            queue.append(m)

    for ci, x in enumerate(arena.eve_labels):
        m = enter(K & arena.eve_classes[ci])
        update[(INIT, x)] = m
        visit(m)
    while queue:
        M = queue.popleft()
        a, nxt = family.witness(M)
        output[M] = arena.eve_actions[a]
        for ci, x in enumerate(arena.eve_labels):
            m = enter(nxt & arena.eve_classes[ci])
            update[(M, x)] = m
            visit(m)
    return FiniteMemoryStrategy(tuple(memory), INIT, output, update)


@dataclass(eq=False)
class ReductionArtifacts:
    """A derived arena plus how its states correspond to the original ones.

    ``origin[i]`` is ``(state index, automaton state)`` for automaton
    products and the bitmask of original states ``H`` for the more-informed
    reduction.
    """

    arena: Arena
    origin: tuple
    final: Optional[int] = None
    initial: Optional[int] = None
    automaton: Optional[ConstraintAutomaton] = None


def product_arena_with_automaton(arena: Arena, T: ConstraintAutomaton) -> ReductionArtifacts:
    """Arena over ``states x automaton states`` where Eve also observes the automaton state.

    Product state ``(s, q)`` has index ``q_index * |S| + s``. Adam is
    perfectly informed in the product.
    """
    n = arena.n
    Q = T.states
    qidx = {q: i for i, q in enumerate(Q)}
    states, origin = [], []
    for q in Q:
        for s in range(n):
            states.append((arena.states[s], q))
            origin.append((s, q))
    delta = {}
    for qi, q in enumerate(Q):
        for s in range(n):
            for ai, a in enumerate(arena.eve_actions):
                for b in range(len(arena.adam_actions)):
                    delta[(qi * n + s, ai, b)] = tuple(
                        (qidx[T.step(q, a, arena.eve_label_of(t))] * n + t, p)
                        for t, p in arena.delta[(s, ai, b)])
    eve_classes, eve_labels = [], []
    for qi, q in enumerate(Q):
        for ci, c in enumerate(arena.eve_classes):
            eve_classes.append(c << (qi * n))
            eve_labels.append((arena.eve_labels[ci], q))
    size = n * len(Q)
    product = Arena(states, arena.eve_actions, arena.adam_actions, delta, eve_classes,
                    [1 << i for i in range(size)], eve_labels, states)
    return ReductionArtifacts(product, tuple(origin), automaton=T)


def knowledge_safety_region(product: ReductionArtifacts, forbidden: int,
                            initial: Optional[int] = None) -> tuple[frozenset, dict]:
    """Largest knowledge family from which Eve surely avoids ``forbidden``.

    Returns the family and, for each member, the actions (names) keeping the
    next knowledge inside it. With ``initial`` given, only knowledges
    reachable from it are considered.
    """
    A = product.arena
    if initial is None:
        candidates = set(A.knowledges())
    else:
        candidates = {initial}
        queue = deque([initial])
        while queue:
            K = queue.popleft()
            if K & forbidden:
                continue
            for a in range(len(A.eve_actions)):
                post = A.post(K, a)
                for c in A.eve_classes:
                    nxt = post & c
                    if nxt and nxt not in candidates:
                        candidates.add(nxt)
                        queue.append(nxt)
    region = {K for K in candidates if K & forbidden == 0}
    aut = {}
    changed = True
    while changed:
        changed = False
        for K in list(region):
            acts = allowed_actions(A, K, region)
            if acts:
                aut[K] = acts
            else:
                region.discard(K)
                aut.pop(K, None)
                changed = True
    return frozenset(region), {K: frozenset(A.eve_actions[a] for a in aut[K]) for K in region}


def _safety_automaton(arena: Arena, T: ConstraintAutomaton, prod: ReductionArtifacts,
                      region: frozenset, aut: dict, initial: int) -> ConstraintAutomaton:
    """Knowledge automaton of the product restricted to the sure-safety region."""
    A = prod.arena
    n = arena.n
    start = initial if initial in region else SINK
    trans, impossible = {}, set()
    states = []
    if start != SINK:
        seen = {start}
        queue = deque([start])
        while queue:
            K = queue.popleft()
            states.append(K)
            q = T.states[((K & -K).bit_length() - 1) // n]
            for ai, a in enumerate(arena.eve_actions):
                post = A.post(K, ai) if a in aut[K] else 0
                for x in arena.eve_labels:
                    if a not in aut[K]:
                        trans[(K, a, x)] = SINK
                        continue
                    nxt = post & A.eve_class_mask((x, T.step(q, a, x)))
                    if nxt == 0:
                        trans[(K, a, x)] = SINK
                        impossible.add((K, a, x))
                        continue
                    assert nxt in region
                    trans[(K, a, x)] = nxt
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    for a in arena.eve_actions:
        for x in arena.eve_labels:
            trans[(SINK, a, x)] = SINK
    act = {K: aut[K] for K in states}
    act[SINK] = frozenset()
    return ConstraintAutomaton(tuple(states) + (SINK,), start, SINK, arena.eve_actions,
                               arena.eve_labels, trans, act, frozenset(impossible))


def _follow_automaton(arena: Arena, T: ConstraintAutomaton,
                      inner: FiniteMemoryStrategy) -> FiniteMemoryStrategy:
    """Run a rank strategy of the automaton product in the original arena.

    Memory pairs the inner memory with the automaton state, which Eve can
    compute from her own actions and observations. Once the inner strategy
    is finished (``done``/``dead``) she keeps playing allowed actions.
    """
    first = arena.eve_actions[0]
    start = (INIT, None)

    def out(mem):
        m, q = mem
        if q is None:
            return first
        if m in (INIT, DONE, DEAD):
            allowed = T.act.get(q, ())
            return next((a for a in arena.eve_actions if a in allowed), first)
        a = inner.output[m]
        assert a in T.act[q], "rank strategy left the automaton's allowed actions"
        return a

    output = {start: first}
    update = {}
    memory = [start]
    queue = deque([start])
    while queue:
        mem = queue.popleft()
        m, q = mem
        for x in arena.eve_labels:
            q2 = T.initial if q is None else T.step(q, output[mem], x)
            nxt = (inner.update[(m, (x, q2))], q2)
            update[(mem, x)] = nxt
            if nxt not in output:
                output[nxt] = out(nxt)
                memory.append(nxt)
                queue.append(nxt)
    return FiniteMemoryStrategy(tuple(memory), start, output, update)


@dataclass(eq=False)
class PositiveReachResult:
    winning: bool
    strategy: Optional[FiniteMemoryStrategy] = None
    horizon: Optional[int] = None
    family: Optional[RankedFamily] = None
    region: Optional[frozenset] = None


def positive_reach_tcompatible_perfect(arena: Arena, T: ConstraintAutomaton, K: int,
                                       final: int) -> PositiveReachResult:
    """Decide whether Eve has a ``T``-compatible positively winning strategy from ``K``.

    Adam must be perfectly informed. The returned strategy is
    ``T``-compatible and reaches ``final`` with positive probability within
    ``horizon`` moves.
    """
    if info_ordering(arena) is not InfoOrdering.ADAM_PERFECT:
        raise Unsupported("Adam must be perfectly informed")
    arena.check_knowledge(K)
    n = arena.n
    prod = product_arena_with_automaton(arena, T)
    q0 = T.states.index(T.initial)
    qs = T.states.index(T.sink)
    init = K << (q0 * n)
    region, aut = knowledge_safety_region(prod, arena.full << (qs * n), init)
    T2 = _safety_automaton(arena, T, prod, region, aut, init)
    prod2 = product_arena_with_automaton(arena, T2)
    final2 = 0
    for qi, q in enumerate(T2.states):
        if q != T2.sink:
            final2 |= final << (qi * n)
    family = reach_fixpoint(prod2.arena, final2)
    start = K << (T2.states.index(T2.initial) * n)
    rank = family.rank(start)
    if rank is None:
        return PositiveReachResult(False, family=family, region=region)
    inner = strategy_from_ranks(prod2.arena, family, start)
    return PositiveReachResult(True, _follow_automaton(arena, T2, inner), rank, family, region)


def more_informed_reduction(arena: Arena, final: int, K: int) -> ReductionArtifacts:
    """Perfect-information arena over Adam-indistinguishable state sets.

    A reduced state is a non-empty set ``H`` of pairwise Adam-equivalent
    states (``origin`` holds its bitmask). From ``H`` under a pair of actions
    the successors are split along Adam's classes and each part is reached
    with uniform probability. Eve observes the Eve class of ``H``, so reduced
    observation labels coincide with the original ones. Only sets reachable
    from the singletons of ``K`` are built.
    """
    if info_ordering(arena) is InfoOrdering.OTHER:
        raise Unsupported("Adam is not more informed than Eve")
    n_e, n_a = len(arena.eve_actions), len(arena.adam_actions)
    order: list[int] = []
    index: dict[int, int] = {}
    queue = deque()

    def visit(H):
        if H not in index:
            index[H] = len(order)
            order.append(H)
            queue.append(H)

    for s in iter_bits(K):
        visit(1 << s)
    ups = {}
    while queue:
        H = queue.popleft()
        for a in range(n_e):
            for b in range(n_a):
                M = 0
                for s in iter_bits(H):
                    M |= arena.succ[s][a][b]
                up = [M & c for c in arena.adam_classes if M & c]
                ups[(H, a, b)] = up
                for H2 in up:
                    visit(H2)
    delta = {}
    for (H, a, b), up in ups.items():
        p = Fraction(1, len(up))
        delta[(index[H], a, b)] = tuple((index[H2], p) for H2 in up)
    groups: dict[int, int] = {}
    for i, H in enumerate(order):
        ci = arena.eve_class_of[(H & -H).bit_length() - 1]
        groups[ci] = groups.get(ci, 0) | (1 << i)
    eve_ci = sorted(groups)
    names = [tuple(arena.sorted_names(H)) for H in order]
    reduced = Arena(names, arena.eve_actions, arena.adam_actions, delta,
                    [groups[ci] for ci in eve_ci], [1 << i for i in range(len(order))],
                    [arena.eve_labels[ci] for ci in eve_ci], names)
    final2 = sum(1 << i for i, H in enumerate(order) if H & final)
    initial = sum(1 << index[1 << s] for s in iter_bits(K))
    return ReductionArtifacts(reduced, tuple(order), final2, initial)


def positive_reach_tcompatible(arena: Arena, T: ConstraintAutomaton, K: int, final: int,
                               reduce: bool = False) -> PositiveReachResult:
    """Dispatch on the information ordering.

    When Adam is only more informed (or ``reduce`` is set), the question is
    solved on :func:`more_informed_reduction` and the strategy found there
    is returned unchanged, since it reads the same observation labels.
    """
    order = info_ordering(arena)
    if order is InfoOrdering.OTHER:
        raise Unsupported("no procedure when Adam is not more informed than Eve")
    arena.check_knowledge(K)
    if order is InfoOrdering.ADAM_PERFECT and not reduce:
        return positive_reach_tcompatible_perfect(arena, T, K, final)
    red = more_informed_reduction(arena, final, K)
    result = positive_reach_tcompatible_perfect(red.arena, T, red.initial, red.final)
    if result.strategy is not None:
        result.strategy = result.strategy.totalize(arena.eve_labels)
    return result
