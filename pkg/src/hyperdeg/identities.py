"""Closed-form subset summation identities and their brute-force oracle.

For a zero-sum deviation vector delta and an r-subset W, write
``G_s(W) = sum_{l in W} delta_l^s`` and ``R_s = sum_l delta_l^s`` (so
R_1 = 0).  Averaging monomials in the G_s over all subsets, all subsets
through a vertex, or all subsets through a pair yields exact rational
functions of n, r, the R_s, and the pinned deviations.  Everything here is
exact: deviations are Fractions, sums are Fractions, and the closed forms
are compared to literal enumeration with zero tolerance.

Only the exact displayed forms are implemented; approximate variants with
unspecified constants are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .budgets import check_subset_budget
from .errors import DegenerateDenominator
from .subsets import iter_colex

SCOPES = ("all", "vertex", "pair")

# (scope, expression, takes_ell, minimum n offset checked at call time)
FAMILIES: tuple[tuple[str, str, bool], ...] = (
    ("all", "gamma_l", True),
    ("all", "gamma1_gamma_l", True),
    ("all", "gamma1_sq", False),
    ("all", "gamma1_cube", False),
    ("all", "gamma1_quartic", False),
    ("all", "gamma2_sq", False),
    ("all", "gamma1sq_gamma2", False),
    ("vertex", "gamma_l", True),
    ("vertex", "gamma1_gamma_l", True),
    ("vertex", "gamma1_sq", False),
    ("vertex", "gamma1_cube", False),
    ("vertex", "gamma1_quartic", False),
    ("pair", "gamma_l", True),
    ("pair", "gamma1_sq", False),
)


@dataclass(frozen=True)
class IdentityFamily:
    scope: str
    expression: str
    ell: int | None = None

    def __post_init__(self):
        if (self.scope, self.expression, self.ell is not None) not in FAMILIES:
            raise ValueError(
                f"unlisted identity family {self.scope}/{self.expression}"
                f"{'' if self.ell is None else f' ell={self.ell}'}"
            )


def _as_fractions(delta: Sequence) -> tuple[Fraction, ...]:
    out = tuple(Fraction(x) for x in delta)
    if sum(out) != 0:
        raise ValueError("deviations must sum to zero exactly")
    return out


def _power_sums(delta: tuple[Fraction, ...], top: int) -> list[Fraction]:
    return [sum(x**s for x in delta) for s in range(top + 1)]


def _denominator(n: int, *factors: int) -> Fraction:
    prod = Fraction(1)
    for f in factors:
        if n - f == 0:
            raise DegenerateDenominator(
                f"closed form needs n != {f} (got n = {n})"
            )
        prod *= n - f
    return prod


def closed_sum(
    family: IdentityFamily,
    n: int,
    r: int,
    delta: Sequence,
    j: int | None = None,
    k: int | None = None,
) -> Fraction:
    """Exact closed form of the normalized subset sum.

    The normalization is 1 / C(n-1, r-1) for every scope.  ``j`` (and
    ``k``) select the pinned vertices for the vertex and pair scopes.
    """
    d = _as_fractions(delta)
    if len(d) != n:
        raise ValueError(f"{len(d)} deviations for n={n}")
    scope, expr, ell = family.scope, family.expression, family.ell
    nr = n - r
    rs = _power_sums(d, max(4, (ell or 1) + 1))

    if scope == "all":
        if expr == "gamma_l":
            return rs[ell]
        if expr == "gamma1_gamma_l":
            return nr * rs[ell + 1] / _denominator(n, 1)
        if expr == "gamma1_sq":
            return nr * rs[2] / _denominator(n, 1)
        if expr == "gamma1_cube":
            return nr * (n - 2 * r) * rs[3] / _denominator(n, 1, 2)
        if expr == "gamma1_quartic":
            num = 3 * (r - 1) * nr * (nr - 1) * rs[2] ** 2 + nr * (
                n * n - 6 * r * n + 6 * r * r + n
            ) * rs[4]
            return num / _denominator(n, 1, 2, 3)
        if expr == "gamma2_sq":
            return ((r - 1) * rs[2] ** 2 + nr * rs[4]) / _denominator(n, 1)
        if expr == "gamma1sq_gamma2":
            num = (r - 1) * nr * rs[2] ** 2 + nr * (n - 2 * r) * rs[4]
            return num / _denominator(n, 1, 2)

    if scope == "vertex":
        if j is None:
            raise ValueError("vertex scope needs j")
        dj = d[j]
        if expr == "gamma_l":
            return ((r - 1) * rs[ell] + nr * dj**ell) / _denominator(n, 1)
        if expr == "gamma1_gamma_l":
            num = (
                (r - 1) * nr * dj * rs[ell]
                + (r - 1) * nr * rs[ell + 1]
                + nr * (n - 2 * r) * dj ** (ell + 1)
            )
            return num / _denominator(n, 1, 2)
        if expr == "gamma1_sq":
            num = (r - 1) * nr * rs[2] + nr * (n - 2 * r) * dj**2
            return num / _denominator(n, 1, 2)
        if expr == "gamma1_cube":
            num = (
                3 * (r - 1) * nr * (nr - 1) * dj * rs[2]
                + (r - 1) * nr * (n - 2 * r + 1) * rs[3]
                + nr * (n * n - 6 * r * n + 6 * r * r + n) * dj**3
            )
            return num / _denominator(n, 1, 2, 3)
        if expr == "gamma1_quartic":
            num = (
                3 * (r - 2) * (r - 1) * nr * (nr - 1) * rs[2] ** 2
                + 6 * (r - 1) * nr * (nr - 1) * (n - 2 * r) * dj**2 * rs[2]
                + 4 * (r - 1) * nr * (nr - 1) * (n - 2 * r) * dj * rs[3]
                + (r - 1) * nr * (n * n - 6 * r * n + 6 * r * r + 5 * n - 6 * r) * rs[4]
                + nr * (n - 2 * r) * (n * n - 12 * r * n + 12 * r * r + 5 * n) * dj**4
            )
            return num / _denominator(n, 1, 2, 3, 4)

    if scope == "pair":
        if j is None or k is None or j == k:
            raise ValueError("pair scope needs distinct j, k")
        dj, dk = d[j], d[k]
        if expr == "gamma_l":
            num = (r - 2) * (r - 1) * rs[ell] + (r - 1) * nr * (dj**ell + dk**ell)
            return num / _denominator(n, 1, 2)
        if expr == "gamma1_sq":
            num = (r - 2) * (r - 1) * nr * rs[2] + (r - 1) * nr * (
                (n - 2 * r + 1) * (dj**2 + dk**2) + 2 * (nr - 1) * dj * dk
            )
            return num / _denominator(n, 1, 2, 3)

    raise ValueError(f"no closed form for {scope}/{expr}")


def _expression_value(
    expr: str, ell: int | None, gammas: dict[int, Fraction]
) -> Fraction:
    if expr == "gamma_l":
        return gammas[ell]
    if expr == "gamma1_gamma_l":
        return gammas[1] * gammas[ell]
    if expr == "gamma1_sq":
        return gammas[1] ** 2
    if expr == "gamma1_cube":
        return gammas[1] ** 3
    if expr == "gamma1_quartic":
        return gammas[1] ** 4
    if expr == "gamma2_sq":
        return gammas[2] ** 2
    if expr == "gamma1sq_gamma2":
        return gammas[1] ** 2 * gammas[2]
    raise ValueError(f"unknown expression {expr!r}")


def brute_sum(
    family: IdentityFamily,
    n: int,
    r: int,
    delta: Sequence,
    j: int | None = None,
    k: int | None = None,
    budget: int | None = None,
) -> Fraction:
    """Literal enumeration oracle in exact rational arithmetic."""
    d = _as_fractions(delta)
    if len(d) != n:
        raise ValueError(f"{len(d)} deviations for n={n}")
    check_subset_budget(math.comb(n, r), budget)
    scope, expr, ell = family.scope, family.expression, family.ell
    needed = {1, 2}
    if ell is not None:
        needed.update({ell, ell + 1})
    total = Fraction(0)
    for w in iter_colex(n, r):
        if scope == "vertex" and j not in w:
            continue
        if scope == "pair" and not (j in w and k in w):
            continue
        gammas = {s: sum(d[v] ** s for v in w) for s in needed}
        total += _expression_value(expr, ell, gammas)
    return total / math.comb(n - 1, r - 1)


def selftest(
    rng,
    trials_per_family: int = 50,
    n_values: Sequence[int] = (6, 7, 8, 9, 10),
    r_values: Sequence[int] = (3, 4),
) -> list[dict]:
    """Randomized exact-equality sweep over every listed family.

    Deviations are random small integers (occasionally halves) adjusted to
    zero sum.  Returns one record per family with the number of trials and
    failures; a failure means closed and brute values differ as rationals.
    """
    results = []
    for scope, expr, takes_ell in FAMILIES:
        failures = 0
        trials = 0
        for _ in range(trials_per_family):
            n = int(rng.choice(list(n_values)))
            r = int(rng.choice(list(r_values)))
            ell = int(rng.integers(1, 4)) if takes_ell else None
            raw = [Fraction(int(x)) for x in rng.integers(-9, 10, size=n)]
            if rng.integers(0, 2):
                raw = [x / 2 for x in raw]
            raw[-1] -= sum(raw)
            j = int(rng.integers(0, n))
            k = int((j + 1 + rng.integers(0, n - 1)) % n)
            family = IdentityFamily(scope, expr, ell)
            closed = closed_sum(family, n, r, raw, j=j, k=k)
            brute = brute_sum(family, n, r, raw, j=j, k=k)
            trials += 1
            if closed != brute:
                failures += 1
        results.append(
            {"scope": scope, "expression": expr, "trials": trials,
             "failures": failures}
        )
    return results
