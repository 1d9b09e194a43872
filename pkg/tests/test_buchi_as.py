import random

import pytest
from hypothesis import given, strategies as st

from purestrat.arena import make_arena
from purestrat.buchi_as import (almost_sure_buchi, assemble_as_strategy, reachability_to_buchi,
                                xi_step)
from purestrat.corpus import load_corpus
from purestrat.knowledge import update_knowledge
from purestrat.generators import random_arena, random_final
from purestrat.oracle import fix_eve_build_mdp, min_buchi_over_adam, min_reach_over_adam
from purestrat.positive_reach import more_informed_reduction
from purestrat.strategy import constant_strategy, step_strategy

from conftest import arena_and_final, history_problems


def _example2():
    arena = load_corpus("example2").arena
    return arena, arena.mask(["q_f"]), arena.mask(["q_w"])


def test_xi_step_examples():
    arena, final, K = _example2()
    assert xi_step(arena, final, set()) == frozenset()
    family = {K, final}
    once = xi_step(arena, final, family)
    assert once == {final}
    assert xi_step(arena, final, once) == once


def test_all_final_self_loops_fixed_immediately():
    states = ["p", "q"]
    trans = {(s, "a", "b"): {s: 1} for s in states}
    arena = make_arena(states, ["a"], ["b"], trans, [states], [["p"], ["q"]])
    family = set(arena.knowledges())
    assert xi_step(arena, arena.full, family) == family
    res = almost_sure_buchi(arena, arena.full, arena.full)
    assert res.winning and res.horizon == 1


def test_example2_is_not_almost_sure():
    arena, final, K = _example2()
    res = almost_sure_buchi(reachability_to_buchi(arena, final), final, K)
    assert not res.winning
    assert history_problems(res.history) == []


def test_fig1_almost_sure_reach_certified():
    arena = load_corpus("fig1").arena
    final, K = arena.mask(["f"]), arena.mask(["s0"])
    buchi = reachability_to_buchi(arena, final)
    res = almost_sure_buchi(buchi, final, K)
    assert res.winning
    mdp = fix_eve_build_mdp(buchi, res.strategy, K, final)
    assert min_buchi_over_adam(mdp)[0] == 1
    size_bound = len(res.winning_knowledges) * res.horizon * max(
        len(s) for s, _ in res.strategies.values())
    assert len(res.strategy.compact()) <= size_bound + 2


def test_reachability_to_buchi():
    arena = load_corpus("fig1").arena
    same = reachability_to_buchi(arena, arena.mask(["f"]))
    assert dict(same.delta) == dict(arena.delta)
    states = ["s0", "s1", "f"]
    trans = {("s0", "a", "b"): {"s1": 1}, ("s1", "a", "b"): {"f": 1}, ("f", "a", "b"): {"s0": 1}}
    chain = make_arena(states, ["a"], ["b"], trans, [[s] for s in states], [[s] for s in states])
    out = reachability_to_buchi(chain, chain.mask(["f"]))
    assert out.delta[(2, 0, 0)] == ((2, 1),)
    assert out.eve_classes == chain.eve_classes


def test_assemble_single_knowledge_round_of_one():
    arena = load_corpus("example2").arena
    f = arena.mask(["q_f"])
    phi = constant_strategy("1", arena.eve_labels)
    assembled = assemble_as_strategy(arena, {f: (phi, 1)}, 1, f)
    m = assembled.initial
    for _ in range(5):
        action, m = step_strategy(assembled, m, "{q_f}")
        assert action == "1"


def test_assemble_missing_strategy_raises():
    arena, final, K = _example2()
    with pytest.raises(ValueError):
        assemble_as_strategy(arena, {}, 1, K)


@given(st.integers(0, 10**6))
def test_iteration_decreases_to_a_fixpoint(seed):
    arena, final = arena_and_final(seed, max_states=4)
    K = next(iter(arena.knowledges()))
    res = almost_sure_buchi(arena, final, K)
    assert history_problems(res.history) == []
    assert xi_step(arena, final, res.winning_knowledges) == res.winning_knowledges


@given(st.integers(0, 10**6), st.integers(0, 2**16), st.integers(0, 2**16))
def test_xi_step_is_monotone(seed, pick_small, pick_extra):
    arena, final = arena_and_final(seed, max_states=4)
    ks = sorted(arena.knowledges())
    small = {K for i, K in enumerate(ks) if pick_small >> (i % 16) & 1}
    big = small | {K for i, K in enumerate(ks) if pick_extra >> (i % 16) & 1}
    assert xi_step(arena, final, small) <= xi_step(arena, final, big)


@given(st.integers(0, 10**6))
def test_assembled_strategies_win_and_keep_knowledge(seed):
    arena, final = arena_and_final(seed, max_states=4)
    for K in arena.knowledges():
        res = almost_sure_buchi(arena, final, K)
        if not res.winning:
            continue
        mdp = fix_eve_build_mdp(arena, res.strategy, K, final)
        assert min_buchi_over_adam(mdp)[0] == 1
        # tracked knowledge stays winning along every consistent play
        seen, frontier = set(), [(s, res.strategy.update[(res.strategy.initial,
                                                           arena.eve_label_of(s))], K)
                                 for s in range(arena.n) if K >> s & 1]
        while frontier:
            s, m, k = frontier.pop()
            if (s, m, k) in seen:
                continue
            seen.add((s, m, k))
            assert k in res.winning_knowledges
            action = res.strategy.output[m]
            a = arena.eve_action_index[action]
            for b in range(len(arena.adam_actions)):
                for t, _ in arena.delta[(s, a, b)]:
                    x = arena.eve_label_of(t)
                    frontier.append((t, res.strategy.update[(m, x)],
                                     update_knowledge(arena, k, action, x)))


@given(st.integers(0, 10**6))
def test_reduced_almost_sure_matches_direct(seed):
    arena, final = arena_and_final(seed, max_states=4)
    for K in arena.knowledges():
        direct = almost_sure_buchi(arena, final, K)
        reduced = almost_sure_buchi(arena, final, K, reduce=True)
        assert direct.winning == reduced.winning
        if reduced.winning:
            mdp = fix_eve_build_mdp(arena, reduced.strategy, K, final)
            assert min_buchi_over_adam(mdp)[0] == 1


@given(st.integers(0, 10**6))
def test_more_informed_round_strategies_certified_in_reduction(seed):
    rng = random.Random(seed)
    arena = random_arena(rng, max_states=4, ordering="more")
    final = random_final(arena, rng)
    K0 = next(iter(arena.knowledges()))
    res = almost_sure_buchi(arena, final, K0)
    assert history_problems(res.history) == []
    for K, (phi, horizon) in res.strategies.items():
        red = more_informed_reduction(arena, final, K)
        mdp = fix_eve_build_mdp(red.arena, phi, red.initial, red.final)
        assert min_reach_over_adam(mdp, horizon=horizon)[0] > 0
