"""Guard on exhaustive enumeration sizes."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 1 << 20
ENV_VAR = "HANKELREC_BUDGET"


class BudgetExceeded(RuntimeError):
    pass


def get_budget(override: int | None = None) -> int:
    if override is not None:
        return override
    env = os.environ.get(ENV_VAR)
    if env:
        return int(env)
    return DEFAULT_BUDGET


def check_budget(q: int, n: int, budget: int | None = None) -> None:
    """Raise BudgetExceeded when W_n (q^(n+1) points) is too large to scan."""
    limit = get_budget(budget)
    size = q ** (n + 1)
    if size > limit:
        raise BudgetExceeded(
            f"enumerating {size} = {q}^{n + 1} points exceeds the budget of {limit} "
            f"(raise it with --budget or {ENV_VAR})"
        )
