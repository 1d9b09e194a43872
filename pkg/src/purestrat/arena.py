"""Concurrent stochastic arenas with imperfect information.

State sets are represented throughout the package as ``int`` bitmasks over
``Arena.states`` (bit ``i`` set means state ``i`` is a member). Actions and
observation classes are referred to by name/label at API boundaries and by
dense indices internally.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping


class InvalidArena(ValueError):
    """Raised with the complete list of problems found in an arena description."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class InfoOrdering(str, enum.Enum):
    ADAM_PERFECT = "AdamPerfect"
    ADAM_MORE_INFORMED = "AdamMoreInformed"
    OTHER = "Other"


class ObjectiveKind(str, enum.Enum):
    REACHABILITY = "reachability"
    SAFETY = "safety"
    BUCHI = "buchi"
    COBUCHI = "cobuchi"


@dataclass(frozen=True)
class Objective:
    kind: ObjectiveKind
    final: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "kind", ObjectiveKind(self.kind))
        object.__setattr__(self, "final", frozenset(self.final))


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """All non-empty submasks of ``mask``, in decreasing numeric order."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def class_label(names: Iterable) -> str:
    return "{" + ",".join(str(n) for n in names) + "}"


@dataclass(frozen=True, eq=False)
class Arena:
    """Finite concurrent arena.

    ``delta`` maps ``(state, eve_action, adam_action)`` index triples to a
    tuple of ``(successor, probability)`` pairs. Partitions are tuples of
    bitmasks, each class carrying a hashable label used as the observation
    symbol by strategies and constraint automata.
    """

    states: tuple
    eve_actions: tuple
    adam_actions: tuple
    delta: Mapping[tuple[int, int, int], tuple[tuple[int, Fraction], ...]]
    eve_classes: tuple[int, ...]
    adam_classes: tuple[int, ...]
    eve_labels: tuple = None
    adam_labels: tuple = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "states", tuple(self.states))
        set_(self, "eve_actions", tuple(self.eve_actions))
        set_(self, "adam_actions", tuple(self.adam_actions))
        set_(self, "eve_classes", tuple(self.eve_classes))
        set_(self, "adam_classes", tuple(self.adam_classes))
        if self.eve_labels is None:
            set_(self, "eve_labels", tuple(
                class_label(self.states[i] for i in iter_bits(c)) for c in self.eve_classes))
        if self.adam_labels is None:
            set_(self, "adam_labels", tuple(
                class_label(self.states[i] for i in iter_bits(c)) for c in self.adam_classes))
        set_(self, "eve_labels", tuple(self.eve_labels))
        set_(self, "adam_labels", tuple(self.adam_labels))
        errors = _structural_errors(self)
        if errors:
            raise InvalidArena(errors)
        n = len(self.states)
        eve_of = [0] * n
        for ci, c in enumerate(self.eve_classes):
            for s in iter_bits(c):
                eve_of[s] = ci
        adam_of = [0] * n
        for ci, c in enumerate(self.adam_classes):
            for s in iter_bits(c):
                adam_of[s] = ci
        succ = [[[0] * len(self.adam_actions) for _ in self.eve_actions] for _ in range(n)]
        for (s, a, b), dist in self.delta.items():
            m = 0
            for t, _ in dist:
                m |= 1 << t
            succ[s][a][b] = m
        set_(self, "eve_class_of", tuple(eve_of))
        set_(self, "adam_class_of", tuple(adam_of))
        set_(self, "succ", succ)
        set_(self, "state_index", {s: i for i, s in enumerate(self.states)})
        set_(self, "eve_action_index", {a: i for i, a in enumerate(self.eve_actions)})
        set_(self, "adam_action_index", {a: i for i, a in enumerate(self.adam_actions)})
        set_(self, "eve_label_index", {x: i for i, x in enumerate(self.eve_labels)})
        set_(self, "adam_label_index", {x: i for i, x in enumerate(self.adam_labels)})

    # -- conversions -----------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def full(self) -> int:
        return (1 << len(self.states)) - 1

    def mask(self, names: Iterable) -> int:
        m = 0
        for name in names:
            m |= 1 << self.state_index[name]
        return m

    def names(self, mask: int) -> frozenset:
        return frozenset(self.states[i] for i in iter_bits(mask))

    def sorted_names(self, mask: int) -> list:
        return [self.states[i] for i in iter_bits(mask)]

    def eve_label_of(self, s: int):
        return self.eve_labels[self.eve_class_of[s]]

    def adam_label_of(self, s: int):
        return self.adam_labels[self.adam_class_of[s]]

    def eve_class_mask(self, label) -> int:
        return self.eve_classes[self.eve_label_index[label]]

    # -- dynamics --------------------------------------------------------
    def distribution(self, s: int, a: int, b: int) -> tuple[tuple[int, Fraction], ...]:
        return self.delta[(s, a, b)]

    def post(self, K: int, a: int) -> int:
        """States reachable in one step from ``K`` under Eve action index ``a``."""
        key = ("post", K, a)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        m = 0
        for s in iter_bits(K):
            for sb in self.succ[s][a]:
                m |= sb
        self._cache[key] = m
        return m

    def is_knowledge(self, K: int) -> bool:
        return K != 0 and any(K & ~c == 0 for c in self.eve_classes)

    def check_knowledge(self, K: int) -> None:
        if not self.is_knowledge(K):
            raise ValueError(
                f"{sorted(map(str, self.names(K)))} is not a non-empty subset of one Eve class")

    def knowledges(self) -> Iterator[int]:
        """Every non-empty subset of every Eve class."""
        for c in self.eve_classes:
            yield from submasks(c)


def _structural_errors(arena: Arena) -> list[str]:
    errors = []
    n = len(arena.states)
    if len(set(arena.states)) != n:
        errors.append("duplicate state identifiers")
    if not arena.eve_actions:
        errors.append("Eve action set is empty")
    if not arena.adam_actions:
        errors.append("Adam action set is empty")
    for who, classes, labels in (("eve", arena.eve_classes, arena.eve_labels),
                                 ("adam", arena.adam_classes, arena.adam_labels)):
        seen = 0
        for c in classes:
            if c == 0:
                errors.append(f"{who} partition has an empty class")
            if c & seen:
                overlap = [arena.states[i] for i in iter_bits(c & seen)]
                errors.append(f"{who} partition classes overlap on {overlap}")
            seen |= c
        if seen != (1 << n) - 1:
            missing = [arena.states[i] for i in iter_bits(((1 << n) - 1) & ~seen)]
            errors.append(f"{who} partition does not cover {missing}")
        if len(labels) != len(classes) or len(set(labels)) != len(labels):
            errors.append(f"{who} class labels are not one distinct label per class")
    for s in range(n):
        for a in range(len(arena.eve_actions)):
            for b in range(len(arena.adam_actions)):
                where = f"({arena.states[s]},{arena.eve_actions[a]},{arena.adam_actions[b]})"
                dist = arena.delta.get((s, a, b))
                if not dist:
                    errors.append(f"transition not total at {where}")
                    continue
                targets = [t for t, _ in dist]
                if len(set(targets)) != len(targets):
                    errors.append(f"duplicate successor at {where}")
                if any(not (0 < p <= 1) for _, p in dist):
                    errors.append(f"probability outside (0,1] at {where}")
                total = sum((p for _, p in dist), Fraction(0))
                if total != 1:
                    errors.append(f"distribution sums to {total} at {where}")
    return errors


def _parse_prob(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"probability must be a 'num/den' string, got {value!r}")


def validate_arena(raw: Mapping) -> Arena:
    """Build an :class:`Arena` from a raw game description (parsed game file).

    All problems are collected and raised together as :class:`InvalidArena`.
    """
    errors = []
    states = list(raw.get("states") or [])
    eve_actions = list(raw.get("eve_actions") or [])
    adam_actions = list(raw.get("adam_actions") or [])
    if not states:
        errors.append("no states")
    index = {s: i for i, s in enumerate(states)}
    e_idx = {a: i for i, a in enumerate(eve_actions)}
    a_idx = {a: i for i, a in enumerate(adam_actions)}

    def classes(key):
        out = []
        for cls in raw.get(key) or []:
            m = 0
            for s in cls:
                if s not in index:
                    errors.append(f"{key} mentions unknown state {s!r}")
                    continue
                m |= 1 << index[s]
            out.append(m)
        return out

    eve_classes = classes("eve_classes")
    adam_classes = classes("adam_classes")
    delta = {}
    for tr in raw.get("transitions") or []:
        try:
            key = (index[tr["from"]], e_idx[tr["eve"]], a_idx[tr["adam"]])
        except KeyError as exc:
            errors.append(f"transition {tr!r} refers to unknown identifier {exc}")
            continue
        where = f"({tr['from']},{tr['eve']},{tr['adam']})"
        if key in delta:
            errors.append(f"transition defined twice at {where}")
            continue
        dist = []
        for item in tr.get("to") or []:
            if item.get("state") not in index:
                errors.append(f"transition at {where} targets unknown state {item.get('state')!r}")
                continue
            try:
                p = _parse_prob(item.get("prob"))
            except (ValueError, ZeroDivisionError):
                errors.append(f"bad probability {item.get('prob')!r} at {where}")
                continue
            dist.append((index[item["state"]], p))
        delta[key] = tuple(dist)
    if errors:
        raise InvalidArena(errors)
    return Arena(states, eve_actions, adam_actions, delta, eve_classes, adam_classes)


def info_ordering(arena: Arena) -> InfoOrdering:
    if all(c & (c - 1) == 0 for c in arena.adam_classes):
        return InfoOrdering.ADAM_PERFECT
    if all(any(c & ~e == 0 for e in arena.eve_classes) for c in arena.adam_classes):
        return InfoOrdering.ADAM_MORE_INFORMED
    return InfoOrdering.OTHER


def support(arena: Arena, s, eve_action, adam_action) -> frozenset:
    """Successor names of state ``s`` under the given action names."""
    m = arena.succ[arena.state_index[s]][arena.eve_action_index[eve_action]][
        arena.adam_action_index[adam_action]]
    return arena.names(m)


def final_mask(arena: Arena, objective_or_final) -> int:
    final = objective_or_final.final if isinstance(objective_or_final, Objective) else objective_or_final
    if isinstance(final, int):
        return final
    return arena.mask(final)


def make_arena(states, eve_actions, adam_actions, transitions: Mapping, eve_classes, adam_classes,
               eve_labels=None, adam_labels=None) -> Arena:
    """Convenience constructor from names.

    ``transitions`` maps ``(state, eve_action, adam_action)`` name triples to
    ``{successor: probability}``.
    """
    states = list(states)
    index = {s: i for i, s in enumerate(states)}
    e_idx = {a: i for i, a in enumerate(eve_actions)}
    a_idx = {a: i for i, a in enumerate(adam_actions)}
    delta = {}
    for (s, a, b), dist in transitions.items():
        delta[(index[s], e_idx[a], a_idx[b])] = tuple(
            (index[t], Fraction(p)) for t, p in dist.items())

    def masks(classes):
        return [sum(1 << index[s] for s in cls) for cls in classes]

    return Arena(states, eve_actions, adam_actions, delta, masks(eve_classes), masks(adam_classes),
                 eve_labels, adam_labels)


def with_transitions(arena: Arena, delta) -> Arena:
    """Copy of ``arena`` with a replaced transition map (partitions and labels kept)."""
    return Arena(arena.states, arena.eve_actions, arena.adam_actions, delta, arena.eve_classes,
                 arena.adam_classes, arena.eve_labels, arena.adam_labels)
