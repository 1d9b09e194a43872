"""Independent exact verification of Eve strategies and brute-force game solving.

Fixing a finite-memory Eve strategy turns the arena into a finite Markov
decision process in which Adam is the only decision maker. With Adam
perfectly informed the process is fully observable to him, so memoryless
Adam strategies suffice to attain the minimal reachability and Büchi
probabilities. All probabilities are exact ``Fraction`` values.

This module deliberately shares nothing with the solver beyond the arena
data structure: knowledge updates, rank search and strategy construction
are redone here in a direct, naive way.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arena import Arena, InfoOrdering, info_ordering, iter_bits
from .errors import BudgetExceeded, Unsupported, default_budget
from .strategy import FiniteMemoryStrategy

ZERO, ONE = Fraction(0), Fraction(1)


# --------------------------------------------------------------------------
# Markov chains


@dataclass(eq=False)
class MarkovChain:
    """Finite chain; ``rows[i]`` lists ``(j, p)`` with exact probabilities."""

    rows: list
    target: frozenset

    def __len__(self):
        return len(self.rows)


def _can_reach(rows, target) -> set:
    preds = [[] for _ in rows]
    for i, row in enumerate(rows):
        for j, _ in row:
            preds[j].append(i)
    seen = set(target)
    queue = deque(target)
    while queue:
        j = queue.popleft()
        for i in preds[j]:
            if i not in seen:
                seen.add(i)
                queue.append(i)
    return seen


def _size(q: Fraction) -> int:
    return q.numerator.bit_length() + q.denominator.bit_length()


def solve_linear(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination; pivots are chosen with the smallest bit size."""
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = min((r for r in range(col, n) if a[r][col] != 0),
                    key=lambda r: _size(a[r][col]), default=None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        pv = a[col][col]
        row = a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / pv
                target = a[r]
                for k in range(col, n + 1):
                    if row[k] != 0:
                        target[k] -= f * row[k]
    return [a[i][n] / a[i][i] for i in range(n)]


def reach_probabilities(chain: MarkovChain) -> list[Fraction]:
    """Probability of eventually visiting the target, for every state."""
    target = set(chain.target)
    positive = _can_reach(chain.rows, target)
    unknown = [i for i in range(len(chain)) if i in positive and i not in target]
    pos = {i: k for k, i in enumerate(unknown)}
    matrix = [[ZERO] * len(unknown) for _ in unknown]
    rhs = [ZERO] * len(unknown)
    for i in unknown:
        k = pos[i]
        matrix[k][k] += ONE
        for j, p in chain.rows[i]:
            if j in target:
                rhs[k] += p
            elif j in pos:
                matrix[k][pos[j]] -= p
    values = solve_linear(matrix, rhs) if unknown else []
    out = [ZERO] * len(chain)
    for i in target:
        out[i] = ONE
    for i in unknown:
        out[i] = values[pos[i]]
    return out


def markov_chain_reach_prob(chain: MarkovChain, start: int) -> Fraction:
    return reach_probabilities(chain)[start]


def _sccs(nodes, succ) -> list[list[int]]:
    """Tarjan's algorithm, iterative; ``succ(i)`` yields neighbours."""
    index, low, on, stack, out = {}, {}, set(), [], []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def buchi_probabilities(chain: MarkovChain) -> list[Fraction]:
    """Probability of visiting the target infinitely often, for every state."""
    nodes = range(len(chain))
    good = set()
    for comp in _sccs(nodes, lambda i: (j for j, _ in chain.rows[i])):
        members = set(comp)
        bottom = all(j in members for i in comp for j, _ in chain.rows[i])
        if bottom and members & chain.target:
            good |= members
    return reach_probabilities(MarkovChain(chain.rows, frozenset(good)))


# --------------------------------------------------------------------------
# Product with a fixed Eve strategy


@dataclass(eq=False)
class ProductMDP:
    """Arena states paired with Eve memory; Adam picks ``trans[i][b]``."""

    arena: Arena
    strategy: FiniteMemoryStrategy
    states: list
    index: dict
    starts: list
    trans: list
    target: frozenset

    def __len__(self):
        return len(self.states)

    def support(self, i: int, b: int) -> set:
        return {j for j, _ in self.trans[i][b]}

    def chain(self, policy, target=None) -> MarkovChain:
        return MarkovChain([self.trans[i][policy[i]] for i in range(len(self))],
                           self.target if target is None else frozenset(target))


def fix_eve_build_mdp(arena: Arena, strategy: FiniteMemoryStrategy, starts: int,
                      final: int = 0) -> ProductMDP:
    """Reachable product of ``arena`` with ``strategy`` from the states in ``starts``.

    The Eve memory of a start state is the memory after reading its
    observation. ``final`` marks product states whose arena state is final.
    """
    if info_ordering(arena) is InfoOrdering.OTHER:
        raise Unsupported("the oracle needs Adam at least as informed as Eve")
    problems = strategy.missing(arena.eve_labels)
    if problems:
        raise ValueError("strategy is not total on this arena: " + "; ".join(problems[:3]))
    states, index, queue = [], {}, deque()

    def visit(s, m):
        key = (s, m)
        if key not in index:
            index[key] = len(states)
            states.append(key)
            queue.append(key)
        return index[key]

    starts_idx = [visit(s, strategy.update[(strategy.initial, arena.eve_label_of(s))])
                  for s in iter_bits(starts)]
    trans = []
    while queue:
        s, m = queue.popleft()
        a = arena.eve_action_index[strategy.output[m]]
        rows = []
        for b in range(len(arena.adam_actions)):
            rows.append(tuple((visit(t, strategy.update[(m, arena.eve_label_of(t))]), p)
                              for t, p in arena.delta[(s, a, b)]))
        trans.append(rows)
    target = frozenset(i for i, (s, _) in enumerate(states) if final >> s & 1)
    return ProductMDP(arena, strategy, states, index, starts_idx, trans, target)


# --------------------------------------------------------------------------
# Adam optimisation on the product


def adam_trap(mdp: ProductMDP, target=None) -> set:
    """States where Adam keeps the play away from ``target`` forever, surely.

    Greatest set of non-target states in which every state has an action
    whose support stays inside the set. Minimal reachability is zero
    exactly here.
    """
    target = mdp.target if target is None else target
    region = set(range(len(mdp))) - set(target)
    changed = True
    while changed:
        changed = False
        for i in list(region):
            if not any(mdp.support(i, b) <= region for b in range(len(mdp.trans[i]))):
                region.discard(i)
                changed = True
    return region


def _evaluate(mdp, policy, target):
    return reach_probabilities(mdp.chain(policy, target))


def _min_reach_policy(mdp: ProductMDP, target) -> tuple[list, list]:
    trap = adam_trap(mdp, target)
    nb = len(mdp.arena.adam_actions)
    policy = []
    for i in range(len(mdp)):
        stay = next((b for b in range(nb) if i in trap and mdp.support(i, b) <= trap), 0)
        policy.append(stay)
    for _ in range(10 * len(mdp) * nb + 10):
        values = _evaluate(mdp, policy, target)
        changed = False
        for i in range(len(mdp)):
            if i in target or i in trap:
                continue
            q = [sum((p * values[j] for j, p in mdp.trans[i][b]), ZERO) for b in range(nb)]
            best = min(q)
            if best < q[policy[i]]:
                policy[i] = q.index(best)
                changed = True
        if not changed:
            return values, policy
    raise RuntimeError("policy iteration did not converge")


def _enumerate_policies(mdp: ProductMDP, budget: int):
    nb = len(mdp.arena.adam_actions)
    free = [i for i in range(len(mdp)) if i not in mdp.target]
    count = nb ** len(free)
    if count > budget:
        raise BudgetExceeded(f"{count} Adam memoryless strategies exceed the budget {budget}")
    for choice in itertools.product(range(nb), repeat=len(free)):
        policy = [0] * len(mdp)
        for i, b in zip(free, choice):
            policy[i] = b
        yield policy


def min_reach_over_adam(mdp: ProductMDP, starts=None, method: str = "policy",
                        budget: Optional[int] = None, horizon: Optional[int] = None):
    """Minimal probability, over Adam, of reaching the target from the worst start.

    Returns ``(value, witness)`` where the witness is a memoryless Adam
    policy (list indexed by product state). ``method="enumerate"`` evaluates
    every memoryless policy and is kept as a cross-check of the default
    policy iteration. With ``horizon`` the probability of reaching the
    target within that many moves is computed by backward induction; the
    witness is then the policy of the first move.
    """
    starts = mdp.starts if starts is None else starts
    if not starts:
        raise ValueError("no start state")
    target = mdp.target
    nb = len(mdp.arena.adam_actions)
    if horizon is not None:
        values = [ONE if i in target else ZERO for i in range(len(mdp))]
        policy = [0] * len(mdp)
        for _ in range(horizon):
            nxt = []
            for i in range(len(mdp)):
                if i in target:
                    nxt.append(ONE)
                    continue
                q = [sum((p * values[j] for j, p in mdp.trans[i][b]), ZERO) for b in range(nb)]
                policy[i] = q.index(min(q))
                nxt.append(min(q))
            values = nxt
        return min(values[i] for i in starts), policy
    if method == "enumerate":
        best, witness = None, None
        for policy in _enumerate_policies(mdp, default_budget() if budget is None else budget):
            values = _evaluate(mdp, policy, target)
            v = min(values[i] for i in starts)
            if best is None or v < best:
                best, witness = v, policy
        return best, witness
    values, policy = _min_reach_policy(mdp, target)
    return min(values[i] for i in starts), policy


def _end_components(mdp: ProductMDP, region: set) -> set:
    """Union of end components of the sub-process restricted to ``region``."""
    nb = len(mdp.arena.adam_actions)
    alive = set(region)
    while True:
        allowed = {i: [b for b in range(nb) if mdp.support(i, b) <= alive] for i in alive}
        alive2 = {i for i in alive if allowed[i]}
        comp_of = {}
        for k, comp in enumerate(_sccs(sorted(alive2), lambda i: (
                j for b in allowed[i] for j in mdp.support(i, b) if j in alive2))):
            for i in comp:
                comp_of[i] = k
        keep = {i for i in alive2
                if any(all(comp_of.get(j) == comp_of[i] for j in mdp.support(i, b))
                       for b in allowed[i])}
        if keep == alive:
            return keep
        alive = keep


def _max_reach_policy(mdp: ProductMDP, target) -> tuple[list, list]:
    nb = len(mdp.arena.adam_actions)
    policy = [0] * len(mdp)
    for _ in range(10 * len(mdp) * nb + 10):
        values = _evaluate(mdp, policy, target)
        changed = False
        for i in range(len(mdp)):
            if i in target:
                continue
            q = [sum((p * values[j] for j, p in mdp.trans[i][b]), ZERO) for b in range(nb)]
            best = max(q)
            if best > q[policy[i]]:
                policy[i] = q.index(best)
                changed = True
        if not changed:
            return values, policy
    raise RuntimeError("policy iteration did not converge")


def min_buchi_over_adam(mdp: ProductMDP, starts=None, method: str = "policy",
                        budget: Optional[int] = None):
    """Minimal probability, over Adam, of visiting the target infinitely often.

    Adam minimises Büchi by maximising the probability of reaching an end
    component that avoids the target, then staying in it.
    """
    starts = mdp.starts if starts is None else starts
    if not starts:
        raise ValueError("no start state")
    if method == "enumerate":
        best, witness = None, None
        nb = len(mdp.arena.adam_actions)
        count = nb ** len(mdp)
        b = default_budget() if budget is None else budget
        if count > b:
            raise BudgetExceeded(f"{count} Adam memoryless strategies exceed the budget {b}")
        for choice in itertools.product(range(nb), repeat=len(mdp)):
            values = buchi_probabilities(mdp.chain(list(choice)))
            v = min(values[i] for i in starts)
            if best is None or v < best:
                best, witness = v, list(choice)
        return best, witness
    nb = len(mdp.arena.adam_actions)
    ecs = _end_components(mdp, set(range(len(mdp))) - set(mdp.target))
    values, policy = _max_reach_policy(mdp, ecs)
    for i in ecs:
        policy[i] = next(b for b in range(nb) if mdp.support(i, b) <= ecs)
    return ONE - max(values[i] for i in starts), policy


def adam_strategy_from_policy(mdp: ProductMDP, policy) -> FiniteMemoryStrategy:
    """Adam Moore machine replaying a memoryless product policy.

    Adam must be perfectly informed: his memory is the product state, which
    he can follow because he sees arena states and Eve's strategy is fixed.
    """
    arena = mdp.arena
    if info_ordering(arena) is not InfoOrdering.ADAM_PERFECT:
        raise Unsupported("Adam witness strategies need a perfectly informed Adam")
    start = "start"
    labels = arena.adam_labels
    output = {start: arena.adam_actions[0]}
    update = {}
    for i, (s, m) in enumerate(mdp.states):
        output[i] = arena.adam_actions[policy[i]]
    memory = [start] + list(range(len(mdp)))
    for i, (s, m) in enumerate(list(mdp.states)):
        for t in range(arena.n):
            nxt = mdp.index.get((t, mdp.strategy.update[(m, arena.eve_label_of(t))]))
            update[(i, labels[t])] = nxt if nxt is not None else i
    for t in range(arena.n):
        key = (t, mdp.strategy.update[(mdp.strategy.initial, arena.eve_label_of(t))])
        update[(start, labels[t])] = mdp.index.get(key, start)
    return FiniteMemoryStrategy(tuple(memory), start, output, update)


# --------------------------------------------------------------------------
# Brute-force solving for Eve


@dataclass(eq=False)
class OracleResult:
    winning: bool
    strategy: Optional[FiniteMemoryStrategy] = None
    value: Optional[Fraction] = None
    explored: int = 0


class _Budget:
    def __init__(self, limit):
        self.limit = default_budget() if limit is None else limit
        self.used = 0

    def spend(self, k=1):
        self.used += k
        if self.used > self.limit:
            raise BudgetExceeded(f"search exceeded the budget of {self.limit}")


def _class_of(arena: Arena, s: int) -> int:
    for c in arena.eve_classes:
        if c >> s & 1:
            return c
    raise AssertionError


def _choices(arena: Arena, R: int, final: int, a: int, budget: _Budget) -> list[int]:
    """Every set picking one successor per (non-final state of R, Adam action)."""
    supports = {}
    for s in iter_bits(R & ~final):
        for b in range(len(arena.adam_actions)):
            sup = 0
            for t, _ in arena.delta[(s, a, b)]:
                sup |= 1 << t
            supports[sup] = None
    picks = {0}
    for sup in supports:
        picks = {m | (1 << t) for m in picks for t in iter_bits(sup)}
        budget.spend(len(picks))
    return sorted(picks)


def _post(arena: Arena, K: int, a: int) -> int:
    out = 0
    for s in iter_bits(K):
        for b in range(len(arena.adam_actions)):
            for t, _ in arena.delta[(s, a, b)]:
                out |= 1 << t
    return out


def _requirement_strategy(arena, K0, node_of, choice, final_node) -> FiniteMemoryStrategy:
    """Moore machine walking the requirement nodes picked by the search."""
    start, dead, done = "start", "dead", "done"
    first = arena.eve_actions[0]
    output = {start: first, dead: first, done: first}
    update = {}
    memory = [start, dead, done]
    queue = deque()

    def enter(node):
        if node is None:
            return dead
        if final_node(node):
            return done
        if node not in output:
            a, _ = choice[node]
            output[node] = arena.eve_actions[a]
            memory.append(node)
            queue.append(node)
        return node

    for ci, x in enumerate(arena.eve_labels):
        update[(start, x)] = enter(node_of(None, K0 & arena.eve_classes[ci], ci))
        update[(dead, x)] = dead
        update[(done, x)] = done
    while queue:
        node = queue.popleft()
        _, nxt = choice[node]
        for ci, x in enumerate(arena.eve_labels):
            update[(node, x)] = enter(node_of(node, nxt & arena.eve_classes[ci], ci))
    return FiniteMemoryStrategy(tuple(memory), start, output, update)


def _positive_search(arena: Arena, final: int, K: int, bound, budget: _Budget):
    """AND-OR search over requirement sets; returns (level map, chosen options)."""
    options = {}
    queue = deque([K])
    seen = {K}
    while queue:
        R = queue.popleft()
        if R & ~final == 0:
            continue
        opts = []
        for a in range(len(arena.eve_actions)):
            for Kp in _choices(arena, R, final, a, budget):
                children = [Kp & c for c in arena.eve_classes if Kp & c]
                opts.append((a, Kp, children))
                for ch in children:
                    if ch not in seen:
                        seen.add(ch)
                        queue.append(ch)
        options[R] = opts
    level = {R: 0 for R in seen if R & ~final == 0}
    choice = {}
    step = 0
    while bound is None or step < bound:
        step += 1
        new = {}
        for R, opts in options.items():
            if R in level:
                continue
            for a, Kp, children in opts:
                if all(ch in level for ch in children):
                    new[R] = step
                    choice[R] = (a, Kp)
                    break
        if not new:
            break
        level.update(new)
    return level, choice


def _certify_reach(arena, strategy, starts, final) -> Fraction:
    mdp = fix_eve_build_mdp(arena, strategy, starts, final)
    return min_reach_over_adam(mdp)[0]


def brute_force_positive_reach(arena: Arena, final: int, K: int, memory_bound=None,
                               budget=None) -> OracleResult:
    """Exhaustive search for a pure strategy positively reaching ``final`` from ``K``.

    Eve's choices are explored as requirement sets: the states she commits
    to keep reachable with positive probability after each observation.
    Each candidate successor set picks one successor per pair of a current
    non-final state and an Adam action. ``memory_bound`` caps the number of
    moves considered. Any witness found is certified on the product.
    """
    if info_ordering(arena) is InfoOrdering.ADAM_MORE_INFORMED:
        from .positive_reach import more_informed_reduction
        red = more_informed_reduction(arena, final, K)
        res = brute_force_positive_reach(red.arena, red.final, red.initial, memory_bound, budget)
        if res.strategy is not None:
            res.strategy = res.strategy.totalize(arena.eve_labels)
        return res
    if info_ordering(arena) is not InfoOrdering.ADAM_PERFECT:
        raise Unsupported("brute force needs Adam at least as informed as Eve")
    if not arena.is_knowledge(K):
        raise ValueError("start set must be a non-empty subset of one Eve class")
    budget = budget if isinstance(budget, _Budget) else _Budget(budget)
    level, choice = _positive_search(arena, final, K, memory_bound, budget)
    if K not in level:
        return OracleResult(False, explored=budget.used)

    def node_of(_, R, ci):
        return R or None

    strategy = _requirement_strategy(arena, K, node_of, choice, lambda R: R & ~final == 0)
    value = _certify_reach(arena, strategy, K, final)
    if value <= 0:
        raise AssertionError("brute-force witness failed certification")
    return OracleResult(True, strategy, value, budget.used)


def _safe_family(arena: Arena, family: set) -> tuple[set, dict]:
    """Members from which Eve can keep her knowledge in ``family`` forever."""
    safe = set(family)
    acts = {}
    changed = True
    while changed:
        changed = False
        for k in list(safe):
            ok = []
            for a in range(len(arena.eve_actions)):
                post = _post(arena, k, a)
                if all(post & c == 0 or post & c in safe for c in arena.eve_classes):
                    ok.append(a)
            if ok:
                acts[k] = ok
            else:
                safe.discard(k)
                changed = True
    return safe, {k: acts[k] for k in safe}


def brute_force_almost_sure_buchi(arena: Arena, final: int, K0: int, budget=None) -> OracleResult:
    """Exhaustive almost-sure Büchi check for a perfectly informed Adam.

    Searches, for each candidate knowledge, a round of requirement sets
    reaching ``final`` with positive probability while the knowledge stays
    within the candidate family, and shrinks the family until every member
    succeeds. Certified by ``min_buchi_over_adam == 1``.
    """
    if info_ordering(arena) is not InfoOrdering.ADAM_PERFECT:
        raise Unsupported("almost-sure brute force is implemented for a perfectly informed Adam")
    if not arena.is_knowledge(K0):
        raise ValueError("start set must be a non-empty subset of one Eve class")
    budget = budget if isinstance(budget, _Budget) else _Budget(budget)
    family = {sub for c in arena.eve_classes for sub in _subsets(c)}
    while True:
        safe, acts = _safe_family(arena, family)
        level, choice = _round_search(arena, final, safe, acts, budget)
        winners = {k for k in safe if (k, k) in level}
        if winners == family:
            break
        family = winners
    if K0 not in family:
        return OracleResult(False, explored=budget.used)
    strategy = _round_strategy(arena, final, K0, choice, acts)
    mdp = fix_eve_build_mdp(arena, strategy, K0, final)
    value = min_buchi_over_adam(mdp)[0]
    if value != 1:
        raise AssertionError("brute-force almost-sure witness failed certification")
    return OracleResult(True, strategy, value, budget.used)


def _subsets(mask: int):
    bits = list(iter_bits(mask))
    for r in range(1, len(bits) + 1):
        for combo in itertools.combinations(bits, r):
            yield sum(1 << s for s in combo)


def _round_search(arena, final, safe, acts, budget):
    """Level map over nodes (requirement, knowledge) for one candidate family."""
    options = {}
    queue = deque((k, k) for k in safe)
    seen = set(queue)
    while queue:
        node = queue.popleft()
        R, k = node
        if R & ~final == 0:
            continue
        opts = []
        for a in acts[k]:
            post = _post(arena, k, a)
            for Kp in _choices(arena, R, final, a, budget):
                children = [(Kp & c, post & c) for c in arena.eve_classes if Kp & c]
                opts.append((a, Kp, children))
                for ch in children:
                    if ch not in seen:
                        seen.add(ch)
                        queue.append(ch)
        options[node] = opts
    level = {node: 0 for node in seen if node[0] & ~final == 0}
    choice = {}
    step = 0
    while True:
        step += 1
        new = {}
        for node, opts in options.items():
            if node in level:
                continue
            for a, Kp, children in opts:
                if all(ch in level for ch in children):
                    new[node] = step
                    choice[node] = (a, Kp)
                    break
        if not new:
            return level, choice
        level.update(new)


def _round_strategy(arena, final, K0, choice, acts) -> FiniteMemoryStrategy:
    """Moore machine over (requirement, knowledge) nodes restarting each round."""
    start, dead = "start", "dead"
    first = arena.eve_actions[0]
    output = {start: first, dead: first}
    update = {}
    memory = [start, dead]
    queue = deque()

    def action(node):
        R, k = node
        if R & ~final == 0:
            return acts[k][0]
        return choice[node][0]

    def enter(node):
        if node not in output:
            output[node] = arena.eve_actions[action(node)]
            memory.append(node)
            queue.append(node)
        return node

    for ci, x in enumerate(arena.eve_labels):
        k = K0 & arena.eve_classes[ci]
        update[(start, x)] = enter((k, k)) if k else dead
        update[(dead, x)] = dead
    while queue:
        node = queue.popleft()
        R, k = node
        a = action(node)
        post = _post(arena, k, a)
        nxt_req = choice[node][1] if R & ~final else 0
        for ci, x in enumerate(arena.eve_labels):
            c = arena.eve_classes[ci]
            k2 = post & c
            if k2 == 0:
                update[(node, x)] = dead
                continue
            R2 = nxt_req & c
            update[(node, x)] = enter((R2, k2) if R2 & ~final else (k2, k2))
    return FiniteMemoryStrategy(tuple(memory), start, output, update)


def brute_force_eve(arena: Arena, final: int, objective: str, memory_bound=None, starts=None,
                    budget=None) -> OracleResult:
    """Brute-force decision for ``objective`` in {"PositiveReach", "AlmostSureBuchi"}."""
    if starts is None:
        raise ValueError("a start knowledge is required")
    if objective == "PositiveReach":
        return brute_force_positive_reach(arena, final, starts, memory_bound, budget)
    if objective == "AlmostSureBuchi":
        return brute_force_almost_sure_buchi(arena, final, starts, budget)
    raise ValueError(f"unknown objective {objective!r}")


def small_memory_strategies(arena: Arena, size: int, budget=None):
    """Every Moore machine with ``size`` memory states over Eve's labels."""
    labels = arena.eve_labels
    mem = [f"m{i}" for i in range(size)]
    count = len(arena.eve_actions) ** size * size ** (size * len(labels))
    limit = default_budget() if budget is None else budget
    if count > limit:
        raise BudgetExceeded(f"{count} machines exceed the budget {limit}")
    keys = [(m, x) for m in mem for x in labels]
    for outs in itertools.product(arena.eve_actions, repeat=size):
        for targets in itertools.product(mem, repeat=len(keys)):
            yield FiniteMemoryStrategy(tuple(mem), "m0", dict(zip(mem, outs)),
                                       dict(zip(keys, targets)))


def small_memory_search(arena: Arena, final: int, K: int, objective: str, max_memory: int = 2,
                        budget=None) -> Optional[FiniteMemoryStrategy]:
    """First enumerated small machine certified for ``objective``, or ``None``."""
    for size in range(1, max_memory + 1):
        for strategy in small_memory_strategies(arena, size, budget):
            mdp = fix_eve_build_mdp(arena, strategy, K, final)
            if objective == "PositiveReach":
                if min_reach_over_adam(mdp)[0] > 0:
                    return strategy
            elif min_buchi_over_adam(mdp)[0] == 1:
                return strategy
    return None


def knowledge_only_strategies(arena: Arena, K0: int):
    """Every strategy choosing its action from the current knowledge alone.

    Enumerates assignments of actions to the knowledges reachable under the
    assignment itself, by exploring lazily.
    """
    def extend(assign, frontier):
        if not frontier:
            yield dict(assign)
            return
        k = frontier[0]
        rest = frontier[1:]
        if k in assign:
            yield from extend(assign, rest)
            return
        for a in range(len(arena.eve_actions)):
            assign[k] = a
            post = _post(arena, k, a)
            new = [post & c for c in arena.eve_classes if post & c and post & c not in assign]
            yield from extend(assign, rest + new)
            del assign[k]

    roots = [K0 & c for c in arena.eve_classes if K0 & c]
    for assign in extend({}, roots):
        yield _knowledge_machine(arena, K0, assign)


def _knowledge_machine(arena, K0, assign) -> FiniteMemoryStrategy:
    start, dead = "start", "dead"
    first = arena.eve_actions[0]
    output = {start: first, dead: first}
    update = {}
    for k, a in assign.items():
        output[k] = arena.eve_actions[a]
    for ci, x in enumerate(arena.eve_labels):
        c = arena.eve_classes[ci]
        update[(start, x)] = (K0 & c) or dead
        update[(dead, x)] = dead
        for k, a in assign.items():
            update[(k, x)] = (_post(arena, k, a) & c) or dead
    return FiniteMemoryStrategy(tuple([start, dead] + list(assign)), start, output, update)
