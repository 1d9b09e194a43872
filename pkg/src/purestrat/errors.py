class Unsupported(Exception):
    """No decision procedure exists for the arena's information ordering."""


class BudgetExceeded(Exception):
    """An enumeration or search exceeded its configured budget."""


DEFAULT_BUDGET = 10**6


def default_budget() -> int:
    import os

    value = os.environ.get("PURESTRAT_BUDGET")
    return int(value) if value else DEFAULT_BUDGET
