"""Damped Newton solver for the degree system.

The system asks for a vector beta whose per-vertex sums of edge weights
reproduce the degrees: ``sum_{W contains j} lambda_W(beta) = d_j``.  Its
Jacobian is exactly twice the weight matrix, which is symmetric positive
definite away from degenerate edge sizes, so each Newton step is a Cholesky
solve.  A solution is unique when it exists (the segment entropy between two
candidate solutions is strictly concave), which justifies single-solution
semantics and the uniqueness diagnostic below.

Three seeds are available, mirroring the regimes in which existence is
known: a constant vector from the density (regular), a degree-product seed
for sparse instances, and a near-regular expansion seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import logsumexp

from .budgets import check_subset_budget
from .core import DegreeSequence, DerivedParams, QuadrantTransform, derive
from .errors import (
    DensityDegenerate,
    NonConvergence,
    SingularJacobian,
    Unsolved,
    ZeroDegree,
)
from .fields import BetaVector, as_beta_array, field_summary, logistic
from .parallel import Twofold, map_chunks
from .subsets import CHUNK, iter_chunks

SPREAD_GUARD = 50.0
MAX_HALVINGS = 60

SEED_STRATEGIES = ("auto", "regular", "product", "near-regular", "custom")


@dataclass
class SolveReport:
    beta_star: BetaVector
    iterations: int
    residual_inf: float
    spread: float
    converged: bool
    seed_used: str

    def to_json_dict(self) -> dict:
        return {
            "beta": self.beta_star.beta.tolist(),
            "residual_inf": self.residual_inf,
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed_used,
        }


def _regular_seed(params: DerivedParams) -> np.ndarray:
    lam = params.lam
    if not (0.0 < lam < 1.0):
        raise DensityDegenerate(f"density {lam} has no finite seed")
    value = math.log(lam / (1.0 - lam)) / params.r
    return np.full(params.n, value)


def _product_seed(
    seq: DegreeSequence, budget: int | None = None
) -> np.ndarray:
    """Seed from degree products over (r-1)-subsets.

    beta_j = log d_j - (1/r) log S with
    S = ((n-r+1)/n) * sum over (r-1)-subsets of the degree product.
    """
    n, r = seq.n, seq.r
    if any(dj == 0 for dj in seq.degrees):
        raise ZeroDegree("product seed needs all degrees positive")
    check_subset_budget(math.comb(n, r - 1), budget)
    log_d = np.log(np.asarray(seq.degrees, dtype=np.float64))
    chunk_lse: list[float] = []
    for idx in iter_chunks(n, r - 1, CHUNK):
        chunk_lse.append(float(logsumexp(log_d[idx].sum(axis=1))))
    log_s = float(logsumexp(chunk_lse)) + math.log((n - r + 1) / n)
    return log_d - log_s / r


def _near_regular_seed(params: DerivedParams) -> np.ndarray:
    """Regular seed plus the explicit near-regular correction.

    The correction per vertex is
    ``(n-1) delta_j / ((1-lam)(n-r) d)
      - (n - 2 lam n - 2r) n delta_j^2 / (2 (1-lam)^2 (n-r)^2 d^2)
      + delta_j^3 / (3 d^3)
      - r R2 / (2 (n-r)^2 d^2)
      + R2 / (2 n (n-r) d^2)``.
    """
    n, r = params.n, params.r
    lam, d = params.lam, params.d
    if not (0.0 < lam < 1.0):
        raise DensityDegenerate(f"density {lam} has no finite seed")
    delta = np.array([float(x) for x in params.delta])
    r2 = params.r2
    gamma = (
        (n - 1) * delta / ((1.0 - lam) * (n - r) * d)
        - (n - 2.0 * lam * n - 2.0 * r) * n * delta**2
        / (2.0 * (1.0 - lam) ** 2 * (n - r) ** 2 * d**2)
        + delta**3 / (3.0 * d**3)
        - r * r2 / (2.0 * (n - r) ** 2 * d**2)
        + r2 / (2.0 * n * (n - r) * d**2)
    )
    return _regular_seed(params) + gamma


def choose_strategy(params: DerivedParams, degrees) -> str:
    """Seed auto-selection: near-regular, else product, else regular."""
    d = params.d
    if d > 0 and params.delta_max <= d**0.6:
        return "near-regular"
    cap = math.comb(params.n - 1, params.r - 1)
    if all(dj > 0 for dj in degrees) and params.r * d <= cap:
        return "product"
    return "regular"


def initial_beta(
    seq: DegreeSequence,
    strategy: str = "auto",
    budget: int | None = None,
) -> tuple[BetaVector, str]:
    """Seed vector for the Newton iteration; returns (seed, strategy used)."""
    params = derive(seq)
    if strategy == "auto":
        strategy = choose_strategy(params, seq.degrees)
    if strategy == "regular":
        return BetaVector(_regular_seed(params)), "regular"
    if strategy == "product":
        return BetaVector(_product_seed(seq, budget)), "product"
    if strategy == "near-regular":
        return BetaVector(_near_regular_seed(params)), "near-regular"
    raise ValueError(f"unknown seed strategy {strategy!r}")


def _vertex_sums(beta: np.ndarray, n: int, r: int, threads=None) -> np.ndarray:
    acc = Twofold(np.zeros(n))

    def chunk_fn(idx):
        s = beta[idx].sum(axis=1)
        lam = logistic(s)
        out = np.zeros(n)
        for a in range(idx.shape[1]):
            np.add.at(out, idx[:, a], lam)
        return (out,)

    map_chunks(
        iter_chunks(n, r, CHUNK), chunk_fn, lambda _, res: acc.add(res[0]),
        threads=threads,
    )
    return acc.value()


def solve(
    seq: DegreeSequence,
    seed_beta=None,
    strategy: str = "auto",
    tol: float = 1e-10,
    max_iter: int = 100,
    budget: int | None = None,
    threads: int | None = None,
) -> SolveReport:
    """Solve the degree system by damped Newton iteration.

    The step solves ``(2A) step = -residual`` by Cholesky; backtracking
    halves the step until the sup-norm residual strictly decreases, and the
    spread guard aborts once ``spread * r`` exceeds 50 (far outside any
    regime with a solution).  Convergence means
    ``max_j |residual_j| <= tol * max(d, 1)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    params = derive(seq)
    n, r = seq.n, seq.r
    check_subset_budget(math.comb(n, r), budget)
    if seed_beta is not None:
        beta = as_beta_array(seed_beta, n)
        seed_used = "custom"
    else:
        vec, seed_used = initial_beta(seq, strategy, budget)
        beta = vec.beta
    if not np.all(np.isfinite(beta)):
        raise ValueError("seed vector must be finite")

    degrees = np.asarray(seq.degrees, dtype=np.float64)
    target = tol * max(params.d, 1.0)
    residual = _vertex_sums(beta, n, r, threads) - degrees
    res_norm = float(np.abs(residual).max())

    for iteration in range(max_iter + 1):
        if res_norm <= target:
            return SolveReport(
                beta_star=BetaVector(beta.copy(), residual_inf=res_norm),
                iterations=iteration,
                residual_inf=res_norm,
                spread=float(beta.max() - beta.min()),
                converged=True,
                seed_used=seed_used,
            )
        if iteration == max_iter:
            break
        field = field_summary(beta, n, r, budget=budget, threads=threads)
        jacobian = field.pair_weights  # equals 2A exactly
        try:
            factor = scipy.linalg.cho_factor(jacobian, check_finite=False)
        except scipy.linalg.LinAlgError as exc:
            raise SingularJacobian(
                f"Jacobian not positive definite at iteration {iteration}: {exc}"
            ) from exc
        step = scipy.linalg.cho_solve(factor, -residual, check_finite=False)

        scale = 1.0
        for _ in range(MAX_HALVINGS + 1):
            candidate = beta + scale * step
            cand_residual = _vertex_sums(candidate, n, r, threads) - degrees
            cand_norm = float(np.abs(cand_residual).max())
            if cand_norm < res_norm:
                break
            scale *= 0.5
        else:
            raise NonConvergence(
                f"{MAX_HALVINGS} step halvings without residual decrease "
                f"(residual {res_norm:.3e})"
            )
        beta, residual, res_norm = candidate, cand_residual, cand_norm
        spread = float(beta.max() - beta.min())
        if spread * r > SPREAD_GUARD:
            raise NonConvergence(
                f"spread*r = {spread * r:.2f} exceeded guard {SPREAD_GUARD}; "
                "instance appears infeasible"
            )

    raise NonConvergence(
        f"no convergence after {max_iter} iterations (residual {res_norm:.3e})"
    )


def require_converged(report: SolveReport) -> SolveReport:
    if not report.converged:
        raise Unsolved("operation requires a converged solve report")
    return report


def apply_beta_symmetry(beta, t: QuadrantTransform, n: int, r: int) -> np.ndarray:
    """Solution vector of the transformed instance, given one for the base.

    Edge-complement and the double complement divide the coordinate sum by
    n - r; the set complement negates.
    """
    arr = as_beta_array(beta, n)
    if t is QuadrantTransform.IDENTITY:
        return arr.copy()
    if t is QuadrantTransform.SET_COMPLEMENT:
        return -arr
    shift = arr.sum() / (n - r)
    if t is QuadrantTransform.EDGE_COMPLEMENT:
        return shift - arr
    if t is QuadrantTransform.BOTH:
        return arr - shift
    raise ValueError(f"unknown transform {t!r}")


def uniqueness_diagnostic(
    seq: DegreeSequence,
    beta_a,
    beta_b,
    grid_points: int = 33,
    budget: int | None = None,
    threads: int | None = None,
) -> float:
    """Minimum curvature of the segment entropy between two vectors.

    Along ``xi_W(y) = (1-y) lambda_W(a) + y lambda_W(b)`` the entropy has
    second derivative ``-sum_W (lambda_W(b) - lambda_W(a))^2 / (xi (1-xi))``;
    the returned value is the minimum over a y-grid of its negation, which
    is strictly positive whenever the two vectors differ in any weight.
    """
    n, r = seq.n, seq.r
    check_subset_budget(math.comb(n, r) * grid_points, budget)
    a = as_beta_array(beta_a, n)
    b = as_beta_array(beta_b, n)
    ys = np.linspace(0.0, 1.0, grid_points)
    acc = Twofold(np.zeros(grid_points))

    def chunk_fn(idx):
        la = logistic(a[idx].sum(axis=1))
        lb = logistic(b[idx].sum(axis=1))
        diff2 = (lb - la) ** 2
        xi = (1.0 - ys[:, None]) * la[None, :] + ys[:, None] * lb[None, :]
        return ((diff2[None, :] / (xi * (1.0 - xi))).sum(axis=1),)

    map_chunks(
        iter_chunks(n, r, CHUNK), chunk_fn, lambda _, res: acc.add(res[0]),
        threads=threads,
    )
    return float(acc.value().min())


@dataclass
class InverseJacobianCheck:
    status: str  # "pass" | "fail" | "skipped"
    lhs: float
    rhs: float | None
    constant_used: float | None
    detail: str = ""


def inverse_jacobian_bound_check(
    seq: DegreeSequence,
    beta_center,
    beta,
    delta1: float,
    delta2: float,
    constant: float,
    budget: int | None = None,
    threads: int | None = None,
) -> InverseJacobianCheck:
    """Check the inverse-Jacobian sup-norm bound at a perturbed point.

    Preconditions: the center has spread at most delta1 / r, beta lies
    within delta2 / r of it in sup norm, ``e^{delta2} * avg weight(center)``
    is at most 7/8, and ``n >= 16 e^{4 delta1 + 8 delta2}``.  Then the
    inverse of twice the weight matrix at beta has sup norm at most
    ``2^8 * constant * e^{36 delta1 + 73 delta2} / (C(n-1, r-1) * avg)``,
    where ``constant`` is calibrated from the measured inverse-entry bound.
    """
    n, r = seq.n, seq.r
    center = as_beta_array(beta_center, n)
    point = as_beta_array(beta, n)
    spread = float(center.max() - center.min())
    offset = float(np.abs(point - center).max())

    field_c = field_summary(center, n, r, budget=budget, threads=threads)
    avg = field_c.avg_lambda
    reasons = []
    if spread * r > delta1 * (1 + 1e-12):
        reasons.append("center spread exceeds delta1/r")
    if offset * r > delta2 * (1 + 1e-12):
        reasons.append("point further than delta2/r from center")
    if math.exp(delta2) * avg > 7.0 / 8.0:
        reasons.append("e^{delta2} * avg weight exceeds 7/8")
    if n < 16.0 * math.exp(4.0 * delta1 + 8.0 * delta2):
        reasons.append("n below 16 e^{4 delta1 + 8 delta2}")
    if reasons:
        return InverseJacobianCheck(
            status="skipped", lhs=math.nan, rhs=None, constant_used=None,
            detail="; ".join(reasons),
        )

    field_b = field_summary(point, n, r, budget=budget, threads=threads)
    inv = np.linalg.inv(field_b.pair_weights)  # (2A)^{-1}
    lhs = float(np.abs(inv).sum(axis=1).max())
    rhs = (
        2.0**8 * constant * math.exp(36.0 * delta1 + 73.0 * delta2)
        / (math.comb(n - 1, r - 1) * avg)
    )
    return InverseJacobianCheck(
        status="pass" if lhs <= rhs else "fail",
        lhs=lhs,
        rhs=rhs,
        constant_used=constant,
    )
