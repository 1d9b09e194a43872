"""Built-in game instances used as golden tests and CLI examples."""
from __future__ import annotations

from fractions import Fraction

from .gamefile import FORMAT_VERSION, GameFile, canonical_prob, parse_game


def _game(states, eve_actions, adam_actions, rules, eve_classes, adam_classes=None,
          objective=("reachability", ()), start=None, tags=()) -> GameFile:
    """Build a game from a rule function ``rules(s, a, b) -> {t: p}``."""
    if adam_classes is None:
        adam_classes = [[s] for s in states]
    transitions = []
    for s in states:
        for a in eve_actions:
            for b in adam_actions:
                dist = rules(s, a, b)
                transitions.append({"from": s, "eve": a, "adam": b, "to": [
                    {"state": t, "prob": canonical_prob(Fraction(p))} for t, p in dist.items()]})
    raw = {
        "format_version": FORMAT_VERSION,
        "states": list(states),
        "eve_actions": list(eve_actions),
        "adam_actions": list(adam_actions),
        "eve_classes": [list(c) for c in eve_classes],
        "adam_classes": [list(c) for c in adam_classes],
        "transitions": transitions,
        "objective": {"kind": objective[0], "final": list(objective[1])},
    }
    if start is not None:
        raw["start"] = {"knowledge": list(start)}
    if tags:
        raw["tags"] = list(tags)
    return parse_game(raw)


def example2() -> GameFile:
    """Matching-pennies trap: Eve escapes ``q_w`` only by differing from Adam."""
    def rules(s, a, b):
        if s == "q_f" or a == b:
            return {s: 1}
        return {"q_f": 1}

    return _game(["q_w", "q_f"], ["0", "1"], ["0", "1"], rules, [["q_w"], ["q_f"]],
                 objective=("reachability", ["q_f"]), start=["q_w"])


def fig1() -> GameFile:
    """Adam picks a pair of branches; Eve learns which after observing."""
    half = Fraction(1, 2)
    loops = {"s1": "b", "s2": "a", "s3": "a", "s4": "b"}

    def rules(s, a, b):
        if s == "s0":
            return {"s1": half, "s2": half} if b == "a" else {"s3": half, "s4": half}
        if s == "f":
            return {"f": 1}
        return {s: 1} if a == loops[s] else {"f": 1}

    return _game(["s0", "s1", "s2", "s3", "s4", "f"], ["a", "b"], ["a", "b"], rules,
                 [["s0"], ["s1", "s2", "s3", "s4"], ["f"]],
                 objective=("reachability", ["f"]), start=["s0"])


def fig2a() -> GameFile:
    """Two Eve-equivalent states; used for the knowledge-update golden test."""
    def rules(s, a, b):
        if s == "q0":
            return {"q0": 1} if (a, b) == ("b", "a") else {"q1": 1}
        return {"q1": 1} if a == "a" else {"q0": 1}

    return _game(["q0", "q1"], ["a", "b"], ["a", "b"], rules, [["q0", "q1"]],
                 objective=("reachability", ["q0"]), start=["q0", "q1"])


def fig2b() -> GameFile:
    """Knowledge alone is not enough: Eve must remember which branch she left."""
    half = Fraction(1, 2)
    hit = {"s1": ("a", "f1", "t1"), "s2": ("b", "f2", "t2")}

    def rules(s, a, b):
        if s == "s0":
            return {"s1": half, "s2": half}
        if s in hit:
            good, win, lose = hit[s]
            return {win: 1} if a == good else {lose: 1}
        return {"s1": 1} if s.endswith("1") else {"s2": 1}

    return _game(["s0", "s1", "s2", "t1", "t2", "f1", "f2"], ["a", "b"], ["x"], rules,
                 [["s0"], ["s1", "s2"], ["t1", "t2", "f1", "f2"]],
                 objective=("reachability", ["f1", "f2"]), start=["s0"])


def hide_or_run() -> GameFile:
    """Snowball game: Eve waits or throws, Adam hides or runs."""
    table = {("w", "h"): "s_hide", ("w", "r"): "s_home", ("t", "h"): "s_home", ("t", "r"): "s_wet"}

    def rules(s, a, b):
        if s != "s_hide":
            return {s: 1}
        return {table[(a, b)]: 1}

    return _game(["s_hide", "s_home", "s_wet"], ["w", "t"], ["h", "r"], rules,
                 [["s_hide", "s_home", "s_wet"]], objective=("safety", ["s_home"]),
                 start=["s_hide", "s_home", "s_wet"], tags=["simulator-only"])


DEFAULT_PA = {
    "states": ["p0", "p1"],
    "letters": ["a"],
    "initial": "p0",
    "accepting": ["p1"],
    "delta": {("p0", "a"): {"p0": Fraction(1, 2), "p1": Fraction(1, 2)},
              ("p1", "a"): {"p1": 1}},
}


def hide_or_run_modified(pa=None) -> GameFile:
    """Blind variant of the snowball game with two embedded copies of a PA game.

    ``pa`` describes the embedded automaton game (``states``, ``letters``,
    ``initial``, ``accepting`` and ``delta[(state, letter)] -> {state: p}``).
    Playing ``#`` inside the copy chosen by ``r`` ends in ``s_home`` from an
    accepting state and ``s_wet`` otherwise; inside the ``h`` copy it returns
    to ``s_hide`` from an accepting state and ends in ``s_home`` otherwise.
    The ``cheat`` gadget punishes Eve for never playing ``#``.
    """
    pa = pa or DEFAULT_PA
    half = Fraction(1, 2)
    letters = list(pa["letters"])
    copies = {c: [f"{c}.{p}" for p in pa["states"]] for c in ("r", "h")}
    states = ["s_hide", "s_home", "s_wet", "s_c", "s_w", "s_l"] + copies["r"] + copies["h"]
    accepting = set(pa["accepting"])
    sinks = {"s_home", "s_wet", "s_w", "s_l"}

    def rules(s, a, b):
        if s in sinks:
            return {s: 1}
        if s == "s_hide":
            return {"s_c": 1} if b == "cheat" else {f"{b}.{pa['initial']}": 1}
        if s == "s_c":
            return {"s_w": 1} if a == "#" else {"s_l": half, "s_c": half}
        copy, p = s.split(".", 1)
        if a == "#":
            if copy == "r":
                return {"s_home" if p in accepting else "s_wet": 1}
            return {"s_hide" if p in accepting else "s_home": 1}
        return {f"{copy}.{t}": q for t, q in pa["delta"][(p, a)].items()}

    return _game(states, letters + ["#"], ["r", "h", "cheat"], rules, [states],
                 objective=("safety", ["s_home", "s_l"]), start=states,
                 tags=["simulator-only"])


CORPUS = {
    "example2": example2,
    "fig1": fig1,
    "fig2a": fig2a,
    "fig2b": fig2b,
    "hide-or-run": hide_or_run,
    "hide-or-run-modified": hide_or_run_modified,
}


def corpus_names() -> list[str]:
    return list(CORPUS)


def load_corpus(name: str) -> GameFile:
    try:
        return CORPUS[name]()
    except KeyError:
        raise KeyError(f"unknown corpus instance {name!r}; known: {', '.join(CORPUS)}") from None
