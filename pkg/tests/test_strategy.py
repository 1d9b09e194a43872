import math

import pytest
from hypothesis import given, strategies as st

from purestrat.arena import Objective, make_arena
from purestrat.buchi_as import almost_sure_buchi, reachability_to_buchi
from purestrat.corpus import load_corpus
from purestrat.oracle import (adam_strategy_from_policy, fix_eve_build_mdp,
                              knowledge_only_strategies, min_reach_over_adam)
from purestrat.strategy import (FiniteMemoryStrategy, constant_strategy, estimate_objective,
                                simulate, step_strategy)

from conftest import arena_and_final


def test_constant_strategy_repeats():
    s = constant_strategy("a", ["x", "y"])
    assert s.run(["x", "y", "y", "x"]) == ["a"] * 4


def test_identity_update_keeps_memory():
    s = FiniteMemoryStrategy(("m",), "m", {"m": "b"}, {("m", "x"): "m"})
    action, m = step_strategy(s, "m", "x")
    assert (action, m) == ("b", "m")


def test_compact_renames_reachable_memory():
    s = FiniteMemoryStrategy(("p", "q", "unused"), "p", {"p": "a", "q": "b", "unused": "a"},
                             {("p", "x"): "q", ("q", "x"): "p", ("unused", "x"): "unused"})
    c = s.compact()
    assert c.memory == ("m0", "m1")
    assert c.run(["x"] * 4) == s.run(["x"] * 4)


def test_missing_reports_partial_machines():
    s = FiniteMemoryStrategy(("p",), "p", {}, {})
    assert s.missing(["x"])


def test_deterministic_arena_is_seed_independent():
    arena = load_corpus("fig2a").arena
    eve = constant_strategy("a", arena.eve_labels)
    adam = constant_strategy("b", arena.adam_labels)
    plays = {tuple(simulate(arena, eve, adam, "q0", 20, seed).states) for seed in range(5)}
    assert len(plays) == 1


def _fig1_solution():
    arena = load_corpus("fig1").arena
    final, K = arena.mask(["f"]), arena.mask(["s0"])
    res = almost_sure_buchi(reachability_to_buchi(arena, final), final, K)
    return arena, final, K, res.strategy


def test_fig1_plays_reach_f_within_three_steps():
    arena, final, K, strategy = _fig1_solution()
    for adam_action in arena.adam_actions:
        adam = constant_strategy(adam_action, arena.adam_labels)
        for seed in range(20):
            rec = simulate(arena, strategy, adam, "s0", 10, seed, final=["f"])
            assert rec.final_visits and rec.final_visits[0] <= 3


def test_surely_winning_frequency_is_one():
    arena, final, K, strategy = _fig1_solution()
    adam = constant_strategy("b", arena.adam_labels)
    freq = estimate_objective(arena, strategy, adam, "s0", Objective("reachability", ["f"]),
                              runs=50, horizon=10, seed=9)
    assert freq == 1.0


def test_example2_mirror_frequency_is_zero():
    arena = load_corpus("example2").arena
    eve = constant_strategy("0", arena.eve_labels)
    adam = constant_strategy("0", arena.adam_labels)
    freq = estimate_objective(arena, eve, adam, "q_w", Objective("reachability", ["q_f"]),
                              runs=50, horizon=30, seed=1)
    assert freq == 0.0


def test_estimate_rejects_zero_runs():
    arena = load_corpus("example2").arena
    s = constant_strategy("0", arena.eve_labels)
    with pytest.raises(ValueError):
        estimate_objective(arena, s, s, "q_w", Objective("reachability", ["q_f"]), 0, 5, 0)


@pytest.mark.parametrize("runs,seed", [(400, 1), (2000, 2)])
def test_fig2b_estimates_within_binomial_band(runs, seed):
    arena = load_corpus("fig2b").arena
    final, K = arena.mask(["f1", "f2"]), arena.mask(["s0"])
    adam = constant_strategy("x", arena.adam_labels)
    for eve in knowledge_only_strategies(arena, K):
        exact = min_reach_over_adam(fix_eve_build_mdp(arena, eve, K, final))[0]
        p = float(exact)
        freq = estimate_objective(arena, eve, adam, "s0", Objective("reachability", ["f1", "f2"]),
                                  runs, 12, seed)
        assert abs(freq - p) <= 4 * math.sqrt(p * (1 - p) / runs) + 1 / runs


@given(st.integers(0, 10**6), st.integers(0, 2**32))
def test_simulation_is_reproducible_and_respects_supports(seed, sim_seed):
    arena, final = arena_and_final(seed, max_states=5)
    eve = constant_strategy(arena.eve_actions[0], arena.eve_labels)
    mdp = fix_eve_build_mdp(arena, eve, arena.full, final)
    adam = adam_strategy_from_policy(mdp, min_reach_over_adam(mdp)[1])
    start = arena.states[sim_seed % arena.n]
    a = simulate(arena, eve, adam, start, 15, sim_seed, final=arena.names(final))
    b = simulate(arena, eve, adam, start, 15, sim_seed, final=arena.names(final))
    assert a == b
    for i in range(len(a)):
        s = arena.state_index[a.states[i]]
        t = arena.state_index[a.states[i + 1]]
        ai = arena.eve_action_index[a.eve_actions[i]]
        bi = arena.adam_action_index[a.adam_actions[i]]
        assert arena.succ[s][ai][bi] >> t & 1


@given(st.integers(0, 10**6), st.integers(0, 2**32))
def test_adam_witness_replays_the_policy(seed, sim_seed):
    arena, final = arena_and_final(seed, max_states=4)
    eve = constant_strategy(arena.eve_actions[-1], arena.eve_labels)
    mdp = fix_eve_build_mdp(arena, eve, arena.full, final)
    value, policy = min_reach_over_adam(mdp)
    adam = adam_strategy_from_policy(mdp, policy)
    start = sim_seed % arena.n
    rec = simulate(arena, eve, adam, arena.states[start], 10, sim_seed)
    m = eve.initial
    for i, name in enumerate(rec.states[:-1]):
        s = arena.state_index[name]
        _, m = step_strategy(eve, m, arena.eve_label_of(s))
        expected = arena.adam_actions[policy[mdp.index[(s, m)]]]
        assert rec.adam_actions[i] == expected


def test_two_state_cycle_simulation():
    arena = make_arena(["p", "q"], ["a"], ["b"],
                       {("p", "a", "b"): {"q": 1}, ("q", "a", "b"): {"p": 1}},
                       [["p", "q"]], [["p"], ["q"]])
    s = constant_strategy("a", arena.eve_labels)
    rec = simulate(arena, s, constant_strategy("b", arena.adam_labels), "p", 4, 0, final=["q"])
    assert rec.states == ["p", "q", "p", "q", "p"]
    assert rec.final_visits == [1, 3]
