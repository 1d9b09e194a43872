import random

import pytest
from hypothesis import HealthCheck, settings

from purestrat.corpus import load_corpus
from purestrat.generators import random_arena, random_final

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def game():
    return load_corpus


def arena_and_final(seed, **kwargs):
    rng = random.Random(seed)
    arena = random_arena(rng, **kwargs)
    return arena, random_final(arena, rng)


def family_structure_problems(family):
    """Downward closure / witness problems of a ranked family, plus level growth."""
    return family.violations()


def history_problems(history):
    problems = []
    for prev, cur in zip(history, history[1:]):
        if not cur <= prev:
            problems.append("iteration is not decreasing")
    if len(history) < 2 or history[-1] != history[-2]:
        problems.append("iteration did not stabilise")
    return problems
