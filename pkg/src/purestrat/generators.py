"""Random arenas for property tests and sweeps."""
from __future__ import annotations

import random
from fractions import Fraction

from .arena import Arena, with_transitions


def _partition(rng: random.Random, items: list[int]) -> list[int]:
    if not items:
        return []
    k = rng.randint(1, len(items))
    groups: dict[int, int] = {}
    for s in items:
        g = rng.randrange(k)
        groups[g] = groups.get(g, 0) | (1 << s)
    return list(groups.values())


def _weights(rng: random.Random, k: int) -> list[Fraction]:
    raw = [rng.randint(1, 6) for _ in range(k)]
    total = sum(raw)
    return [Fraction(w, total) for w in raw]


def random_arena(rng: random.Random, max_states: int = 4, max_eve: int = 2, max_adam: int = 2,
                 ordering: str = "perfect", max_support: int = 3) -> Arena:
    """Arena with random supports and weights.

    ``ordering`` is ``"perfect"`` (Adam sees states), ``"more"`` (Adam's
    classes refine Eve's) or ``"any"``.
    """
    n = rng.randint(1, max_states)
    ne, na = rng.randint(1, max_eve), rng.randint(1, max_adam)
    eve = _partition(rng, list(range(n)))
    if ordering == "perfect":
        adam = [1 << s for s in range(n)]
    elif ordering == "more":
        adam = [part for c in eve for part in _partition(rng, [s for s in range(n) if c >> s & 1])]
    else:
        adam = _partition(rng, list(range(n)))
    delta = {}
    for s in range(n):
        for a in range(ne):
            for b in range(na):
                targets = rng.sample(range(n), rng.randint(1, min(n, max_support)))
                delta[(s, a, b)] = tuple(zip(sorted(targets), _weights(rng, len(targets))))
    return Arena([f"s{i}" for i in range(n)], [f"a{i}" for i in range(ne)],
                 [f"b{i}" for i in range(na)], delta, eve, adam)


def reweight(arena: Arena, rng: random.Random) -> Arena:
    """Same supports, fresh positive probabilities."""
    delta = {key: tuple(zip([t for t, _ in dist], _weights(rng, len(dist))))
             for key, dist in arena.delta.items()}
    return with_transitions(arena, delta)


def random_final(arena: Arena, rng: random.Random) -> int:
    return sum(1 << s for s in range(arena.n) if rng.random() < 0.35)
