"""Ground-truth oracles: exact counts and the coefficient-extraction check.

``exact_count`` extracts the coefficient of ``x_1^{d_1} ... x_n^{d_n}`` in
the product over all r-subsets W of ``(1 + prod_{j in W} x_j)`` — each
factor decides whether W is an edge — by a memoized DP over subsets in
colex order with residual-degree pruning, in exact integer arithmetic.

``cauchy_quadrature`` evaluates the same coefficient as a prefactor times a
tensor-grid sum of the extraction integrand.  The integrand is a
trigonometric polynomial whose per-axis frequencies lie in
``[-d_j, C(n-1, r-1) - d_j]``, so a grid of ``M = 2 C(n-1, r-1) + 1``
points per axis makes the quadrature exact up to floating rounding, for any
finite contour vector beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .budgets import check_dp_budget, check_grid_budget, check_subset_budget
from .core import DegreeSequence, QuadrantTransform, apply_symmetry
from .errors import BudgetExceeded
from .fields import as_beta_array, logistic, softplus
from .parallel import Twofold, map_chunks
from .subsets import all_subsets, iter_colex

DENSE_STATE_CAP = 2 * 10**8  # dense DP tensor entries (int64)
SPARSE_STATE_CAP = 2**23  # dict DP states before switching to dense


@dataclass
class ExactCount:
    value: int
    n: int
    r: int
    degrees: tuple[int, ...]


@lru_cache(maxsize=32)
def _colex_with_suffix_counts(n: int, r: int):
    subsets = list(iter_colex(n, r))
    total = len(subsets)
    rem = [[0] * n for _ in range(total + 1)]
    for i in range(total - 1, -1, -1):
        row = rem[i + 1][:]
        for j in subsets[i]:
            row[j] += 1
        rem[i] = row
    return subsets, rem


def _count_sparse(n: int, r: int, degrees: tuple[int, ...]) -> int:
    subsets, rem = _colex_with_suffix_counts(n, r)
    total = len(subsets)
    memo: dict[tuple[int, tuple[int, ...]], int] = {}

    def count(i: int, res: tuple[int, ...]) -> int:
        if not any(res):
            return 1
        if i == total:
            return 0
        rem_i = rem[i]
        for j in range(n):
            if res[j] > rem_i[j]:
                return 0
        key = (i, res)
        cached = memo.get(key)
        if cached is not None:
            return cached
        value = count(i + 1, res)
        w = subsets[i]
        if all(res[j] > 0 for j in w):
            taken = list(res)
            for j in w:
                taken[j] -= 1
            value += count(i + 1, tuple(taken))
        memo[key] = value
        return value

    return count(0, degrees)


def _count_dense(n: int, r: int, degrees: tuple[int, ...]) -> int:
    """Dense coefficient tensor, exponents capped at the target degrees.

    Safe in int64 because every coefficient is at most 2^(number of
    subsets); callers route here only when that fits.
    """
    shape = tuple(d + 1 for d in degrees)
    grid = np.zeros(shape, dtype=np.int64)
    grid[(0,) * n] = 1
    full = slice(None)
    for w in iter_colex(n, r):
        src = [full] * n
        dst = [full] * n
        for j in w:
            src[j] = slice(0, degrees[j])
            dst[j] = slice(1, degrees[j] + 1)
        grid[tuple(dst)] += grid[tuple(src)].copy()
    return int(grid[tuple(degrees)])


def exact_count(seq: DegreeSequence, budget: int | None = None) -> ExactCount:
    """Exact number of hypergraphs with the given degrees (big integer).

    The DP bound ``prod_j (d_j + 1) * C(n, r)`` is checked against the
    budget; the set-complement image is counted instead whenever its bound
    is smaller (the two counts are equal).
    """
    total = math.comb(seq.n, seq.r)
    work = seq
    bound = math.prod(d + 1 for d in seq.degrees)
    mirror = apply_symmetry(seq, QuadrantTransform.SET_COMPLEMENT)
    mirror_bound = math.prod(d + 1 for d in mirror.degrees)
    if mirror_bound < bound:
        work, bound = mirror, mirror_bound
    check_dp_budget(bound * total, budget)

    degrees = tuple(work.degrees)
    if bound <= SPARSE_STATE_CAP:
        value = _count_sparse(work.n, work.r, degrees)
    elif total <= 62 and bound <= DENSE_STATE_CAP:
        value = _count_dense(work.n, work.r, degrees)
    else:
        raise BudgetExceeded(
            f"DP state bound {bound} too large for exact arithmetic paths"
        )
    return ExactCount(value=value, n=seq.n, r=seq.r, degrees=tuple(seq.degrees))


def _compositions(total: int, parts: int, cap: int):
    """All vectors of length ``parts`` with entries in [0, cap] summing to total."""
    if parts == 1:
        if 0 <= total <= cap:
            yield (total,)
        return
    for head in range(min(total, cap) + 1):
        for rest in _compositions(total - head, parts - 1, cap):
            yield (head,) + rest


def total_identity_check(
    n: int, r: int, m: int, budget: int | None = None
) -> bool:
    """Sum of exact counts over all degree vectors with m edges.

    Every m-edge hypergraph has exactly one degree sequence, so the sum
    must equal ``C(C(n, r), m)`` exactly.
    """
    total_subsets = math.comb(n, r)
    cap = math.comb(n - 1, r - 1)
    n_compositions = math.comb(r * m + n - 1, n - 1)
    check_dp_budget(n_compositions * total_subsets, budget)
    acc = 0
    for degrees in _compositions(r * m, n, cap):
        seq = DegreeSequence(n, r, degrees)
        acc += exact_count(seq, budget=budget).value
    return acc == math.comb(total_subsets, m)


@dataclass
class QuadratureResult:
    value: float
    imag_residual: float
    points_per_axis: int
    grid_points: int


def cauchy_quadrature(
    seq: DegreeSequence,
    beta=None,
    n_guard: int = 6,
    budget: int | None = None,
    threads: int | None = None,
    chunk: int = 1 << 15,
) -> QuadratureResult:
    """Coefficient extraction on a tensor grid; exact up to rounding.

    Valid at any finite contour vector beta (default all zeros): the result
    is independent of the contour because the summed integrand is the same
    trigonometric polynomial on every contour.  The imaginary part of the
    accumulated sum is returned as a residual diagnostic.
    """
    n, r = seq.n, seq.r
    if n > n_guard:
        raise BudgetExceeded(
            f"quadrature guarded to n <= {n_guard} (got n={n}); "
            "raise n_guard explicitly to override"
        )
    arr = (
        np.zeros(n) if beta is None else as_beta_array(beta, n)
    )
    m_axis = 2 * math.comb(n - 1, r - 1) + 1
    grid_total = m_axis**n
    check_grid_budget(grid_total, budget)

    subsets = all_subsets(n, r)
    check_subset_budget(subsets.shape[0], budget)
    incidence = np.zeros((subsets.shape[0], n))
    np.put_along_axis(incidence, subsets, 1.0, axis=1)
    s_w = incidence @ arr
    lam = logistic(s_w)
    degrees = np.asarray(seq.degrees, dtype=np.float64)

    # scale = P_r(beta) * (2 pi / M)^n, with the (2 pi)^{-n} cancelled
    log_scale = (
        -float(arr @ degrees) + float(softplus(s_w).sum()) - n * math.log(m_axis)
    )
    scale = math.exp(log_scale)

    thetas = -math.pi + 2.0 * math.pi * (np.arange(m_axis) + 1.0) / m_axis
    powers = m_axis ** np.arange(n - 1, -1, -1, dtype=np.int64)

    def chunk_fn(bounds):
        lo, hi = bounds
        linear = np.arange(lo, hi, dtype=np.int64)
        digits = (linear[:, None] // powers[None, :]) % m_axis
        theta = thetas[digits]
        phase = theta @ incidence.T
        factors = 1.0 + lam[None, :] * (np.exp(1j * phase) - 1.0)
        values = factors.prod(axis=1) * np.exp(-1j * (theta @ degrees))
        total_c = values.sum()
        return float(total_c.real), float(total_c.imag)

    real_acc = Twofold(0.0)
    imag_acc = Twofold(0.0)

    def combine(_, res):
        real_acc.add(res[0])
        imag_acc.add(res[1])

    bounds = [
        (lo, min(lo + chunk, grid_total)) for lo in range(0, grid_total, chunk)
    ]
    map_chunks(bounds, chunk_fn, combine, threads=threads)

    return QuadratureResult(
        value=scale * real_acc.value(),
        imag_residual=scale * abs(imag_acc.value()),
        points_per_axis=m_axis,
        grid_points=grid_total,
    )
