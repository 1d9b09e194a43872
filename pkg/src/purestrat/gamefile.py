"""JSON game and strategy files with canonical, byte-stable output."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .arena import Arena, InvalidArena, Objective, ObjectiveKind, iter_bits, validate_arena
from .strategy import FiniteMemoryStrategy

FORMAT_VERSION = 1


def canonical_prob(p: Fraction) -> str:
    p = Fraction(p)
    return f"{p.numerator}/{p.denominator}"


@dataclass(eq=False)
class GameFile:
    arena: Arena
    objective: Objective
    start: Optional[frozenset] = None
    tags: tuple = field(default_factory=tuple)

    def __eq__(self, other):
        if not isinstance(other, GameFile):
            return NotImplemented
        return game_to_dict(self) == game_to_dict(other)

    __hash__ = None


def parse_game(raw) -> GameFile:
    """Validate a decoded game description; raises :class:`InvalidArena`."""
    if not isinstance(raw, dict):
        raise InvalidArena(["game file must be a JSON object"])
    errors = []
    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        errors.append(f"unsupported format_version {version!r}")
    try:
        arena = validate_arena(raw)
    except InvalidArena as exc:
        raise InvalidArena(errors + exc.errors) from None
    obj = raw.get("objective") or {}
    try:
        kind = ObjectiveKind(obj.get("kind"))
    except ValueError:
        errors.append(f"unknown objective kind {obj.get('kind')!r}")
        kind = None
    final = obj.get("final") or []
    for s in final:
        if s not in arena.state_index:
            errors.append(f"objective mentions unknown state {s!r}")
    start = None
    if raw.get("start") is not None:
        start = frozenset(raw["start"].get("knowledge") or [])
        if not all(s in arena.state_index for s in start):
            errors.append("start knowledge mentions unknown states")
        elif not arena.is_knowledge(arena.mask(start)):
            errors.append("start knowledge is not a non-empty subset of one Eve class")
    if errors:
        raise InvalidArena(errors)
    return GameFile(arena, Objective(kind, frozenset(final)), start, tuple(raw.get("tags") or ()))


def game_to_dict(game: GameFile) -> dict:
    arena = game.arena

    def classes(masks):
        return [[arena.states[i] for i in iter_bits(c)] for c in masks]

    transitions = []
    for (s, a, b), dist in sorted(arena.delta.items()):
        transitions.append({
            "from": arena.states[s], "eve": arena.eve_actions[a], "adam": arena.adam_actions[b],
            "to": [{"state": arena.states[t], "prob": canonical_prob(p)} for t, p in sorted(dist)],
        })
    out = {
        "format_version": FORMAT_VERSION,
        "states": list(arena.states),
        "eve_actions": list(arena.eve_actions),
        "adam_actions": list(arena.adam_actions),
        "eve_classes": classes(arena.eve_classes),
        "adam_classes": classes(arena.adam_classes),
        "transitions": transitions,
        "objective": {"kind": game.objective.kind.value,
                      "final": arena.sorted_names(arena.mask(game.objective.final))},
    }
    if game.start is not None:
        out["start"] = {"knowledge": arena.sorted_names(arena.mask(game.start))}
    if game.tags:
        out["tags"] = list(game.tags)
    return out


def dumps_game(game: GameFile) -> str:
    return json.dumps(game_to_dict(game), sort_keys=True, indent=2) + "\n"


def loads_game(text: str) -> GameFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArena([f"not valid JSON: {exc}"]) from None
    return parse_game(raw)


def load_game(path) -> GameFile:
    return loads_game(Path(path).read_text())


def save_game(game: GameFile, path) -> None:
    Path(path).write_text(dumps_game(game))


def strategy_to_dict(strategy: FiniteMemoryStrategy, player: str = "eve") -> dict:
    """Serializable listing; memory names and labels are stringified."""
    name = {m: str(m) for m in strategy.memory}
    if len(set(name.values())) != len(name):
        raise ValueError("memory names collide after conversion to strings; compact() first")
    update = {}
    for (m, x), nxt in strategy.update.items():
        update.setdefault(name[m], {})[str(x)] = name[nxt]
    return {
        "format_version": FORMAT_VERSION,
        "player": player,
        "memory": [name[m] for m in strategy.memory],
        "initial": name[strategy.initial],
        "output": {name[m]: strategy.output[m] for m in strategy.memory},
        "update": update,
    }


def parse_strategy(raw) -> FiniteMemoryStrategy:
    if not isinstance(raw, dict):
        raise ValueError("strategy file must be a JSON object")
    if raw.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {raw.get('format_version')!r}")
    memory = list(raw.get("memory") or [])
    update = {(m, x): nxt for m, row in (raw.get("update") or {}).items() for x, nxt in row.items()}
    strategy = FiniteMemoryStrategy(tuple(memory), raw.get("initial"), dict(raw.get("output") or {}),
                                    update)
    problems = strategy.missing(strategy.labels)
    if problems:
        raise ValueError("; ".join(problems))
    return strategy


def dumps_strategy(strategy: FiniteMemoryStrategy, player: str = "eve") -> str:
    return json.dumps(strategy_to_dict(strategy, player), sort_keys=True, indent=2) + "\n"


def load_strategy(path) -> FiniteMemoryStrategy:
    return parse_strategy(json.loads(Path(path).read_text()))


def strategy_player(path) -> str:
    return json.loads(Path(path).read_text()).get("player", "eve")
