"""Enumeration budgets.

Every operation that enumerates r-subsets, DP states, or quadrature grid
points checks an operation count against a budget before starting.  Budgets
are hard guards, not hints: exceeding one raises ``BudgetExceeded`` rather
than silently truncating.  The environment variable ``HYPERDEG_BUDGET``
overrides all three defaults at once; individual calls may also pass an
explicit budget.
"""

from __future__ import annotations

import os

from .errors import BudgetExceeded, GridBudgetExceeded

SUBSET_BUDGET_DEFAULT = 10**8
DP_BUDGET_DEFAULT = 10**9
GRID_BUDGET_DEFAULT = 10**9

_ENV_VAR = "HYPERDEG_BUDGET"


def _env_override() -> int | None:
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return None
    try:
        value = int(float(raw))
    except ValueError:
        return None
    return value if value > 0 else None


def subset_budget(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    return _env_override() or SUBSET_BUDGET_DEFAULT


def dp_budget(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    return _env_override() or DP_BUDGET_DEFAULT


def grid_budget(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    return _env_override() or GRID_BUDGET_DEFAULT


def check_subset_budget(count: int, override: int | None = None) -> None:
    limit = subset_budget(override)
    if count > limit:
        raise BudgetExceeded(
            f"enumeration of {count} subsets exceeds budget {limit}"
        )


def check_dp_budget(count: int, override: int | None = None) -> None:
    limit = dp_budget(override)
    if count > limit:
        raise BudgetExceeded(
            f"DP bound of {count} state-edge operations exceeds budget {limit}"
        )


def check_grid_budget(count: int, override: int | None = None) -> None:
    limit = grid_budget(override)
    if count > limit:
        raise GridBudgetExceeded(
            f"quadrature grid of {count} points exceeds budget {limit}"
        )
