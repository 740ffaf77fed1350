"""The weight matrix, its regular closed form, and log-determinants.

The matrix has entries a_jj = half the variance-weight sum over subsets
containing j, and a_jk = half the sum over subsets containing both j and k.
Twice this matrix is the Jacobian of the degree system, and its determinant
enters the general counting formula.  For a regular instance the matrix is
a closed-form combination aI + bJ with an explicit determinant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import DerivedParams
from .errors import DensityDegenerate, NotPositiveDefinite
from .fields import BoundCheck, FieldSummary, as_beta_array, field_summary

PIVOT_RTOL = 1e-13


@dataclass
class WeightMatrix:
    entries: np.ndarray
    source: str  # "assembled" | "closed-form"

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


def assemble_weight_matrix(
    beta,
    n: int,
    r: int,
    budget: int | None = None,
    threads: int | None = None,
    field: FieldSummary | None = None,
) -> WeightMatrix:
    """Half the pair-weight sums of a field summary, as a dense matrix."""
    if field is None:
        field = field_summary(beta, n, r, budget=budget, threads=threads)
    return WeightMatrix(entries=0.5 * field.pair_weights, source="assembled")


def aI_bJ_logdet(a: float, b: float, n: int) -> float:
    """log |aI + bJ| = (n-1) log a + log(a + bn); requires positivity."""
    if a <= 0 or a + b * n <= 0:
        raise NotPositiveDefinite("aI + bJ has a non-positive eigenvalue")
    return (n - 1) * math.log(a) + math.log(a + b * n)


def regular_closed_form(params: DerivedParams) -> tuple[WeightMatrix, float]:
    """Closed-form matrix and log-determinant for the regular instance.

    The matrix is ``(1-lam)(n-r)d/(2(n-1)) I + (1-lam)(r-1)d/(2(n-1)) J``
    and its determinant equals ``r Q^n / (2^n (n-r) (n-1)^{n-1})``.
    """
    n, r = params.n, params.r
    lam, d, q = params.lam, params.d, params.q
    if not (0.0 < lam < 1.0):
        raise DensityDegenerate(f"density {lam} admits no closed-form matrix")
    a = (1.0 - lam) * (n - r) * d / (2.0 * (n - 1))
    b = (1.0 - lam) * (r - 1) * d / (2.0 * (n - 1))
    entries = a * np.eye(n) + b * np.ones((n, n))
    logdet = (
        math.log(r) + n * math.log(q) - n * math.log(2.0)
        - math.log(n - r) - (n - 1) * math.log(n - 1)
    )
    return WeightMatrix(entries=entries, source="closed-form"), logdet


def logdet_pd(matrix: WeightMatrix | np.ndarray) -> float:
    """Log-determinant via a symmetric Cholesky factorization.

    Raises ``NotPositiveDefinite`` when a pivot falls below
    ``PIVOT_RTOL * max diagonal`` (scale-aware singularity detection).
    """
    m = matrix.entries if isinstance(matrix, WeightMatrix) else np.asarray(matrix)
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(m).max())):
        raise ValueError("matrix must be symmetric")
    diag_max = float(np.max(np.diag(m))) if m.size else 0.0
    if diag_max <= 0:
        raise NotPositiveDefinite("non-positive diagonal")
    try:
        chol = scipy.linalg.cholesky(m, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    pivots = np.diag(chol) ** 2
    if np.min(pivots) < PIVOT_RTOL * diag_max:
        raise NotPositiveDefinite(
            f"pivot {np.min(pivots):.3e} below tolerance {PIVOT_RTOL * diag_max:.3e}"
        )
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def whitening_factor(matrix: WeightMatrix | np.ndarray) -> np.ndarray:
    """A matrix T with T^t A T = I, from the inverse Cholesky factor."""
    m = matrix.entries if isinstance(matrix, WeightMatrix) else np.asarray(matrix)
    chol = scipy.linalg.cholesky(np.asarray(m, dtype=np.float64), lower=True)
    return scipy.linalg.solve_triangular(
        chol, np.eye(m.shape[0]), lower=True, trans="T"
    )


@dataclass
class MatrixBoundReport:
    checks: list[BoundCheck]
    measured_inverse_constant: float | None = None
    measured_offdiag_constant: float | None = None

    @property
    def all_passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)


def bound_suite(
    beta,
    n: int,
    r: int,
    delta_hat: float,
    budget: int | None = None,
    threads: int | None = None,
) -> MatrixBoundReport:
    """Entry-ratio, sandwich, determinant, and inverse-entry checks.

    With spread(beta) * r <= delta_hat:

    * all off-diagonal entries lie within a factor e^{4 delta_hat / r} of
      each other, and likewise all diagonal entries;
    * entries are sandwiched by (big_lambda/2) C(n-2, r-2) e^{+-4d/r}
      (off-diagonal) and (big_lambda/2) C(n-1, r-1) e^{+-4d/r} (diagonal);
    * log|A| is at most log of the comparison determinant
      |e^{2 delta_hat}/2 big_lambda (C(n-2, r-1) I + C(n-2, r-2) J)|;
    * inverse entries scaled by big_lambda C(n-1, r-1) e^{-35 delta_hat}
      (and additionally n off-diagonal) give the measured constants of the
      inverse-entry bound; they are reported, not asserted, because the
      constant in that bound is existential.

    If the spread precondition fails, all checks are reported skipped.
    """
    arr = as_beta_array(beta, n)
    spread = float(arr.max() - arr.min())
    names = (
        "offdiag-entry-ratio",
        "diag-entry-ratio",
        "offdiag-sandwich",
        "diag-sandwich",
        "row-identity",
        "determinant-comparison",
    )
    if r < 2:
        return MatrixBoundReport(
            checks=[
                BoundCheck(name, "skipped", detail="no pair entries at r < 2")
                for name in names
            ]
        )
    if spread * r > delta_hat * (1 + 1e-12):
        return MatrixBoundReport(
            checks=[
                BoundCheck(name, "skipped", detail="spread*r exceeds delta_hat")
                for name in names
            ]
        )

    field = field_summary(arr, n, r, budget=budget, threads=threads)
    mat = assemble_weight_matrix(arr, n, r, field=field)
    a = mat.entries
    big = field.big_lambda
    ratio_cap = 4.0 * delta_hat / r

    off = a[~np.eye(n, dtype=bool)]
    log_off = np.log(off)
    slack_off = float(ratio_cap - (log_off.max() - log_off.min()))
    diag = np.diag(a)
    log_diag = np.log(diag)
    slack_diag = float(ratio_cap - (log_diag.max() - log_diag.min()))

    mid_off = 0.5 * big * math.comb(n - 2, r - 2)
    mid_diag = 0.5 * big * math.comb(n - 1, r - 1)
    slack_off_sand = float(ratio_cap - np.abs(np.log(off / mid_off)).max())
    slack_diag_sand = float(ratio_cap - np.abs(np.log(diag / mid_diag)).max())

    # a_jj = sum of off-diagonal row entries / (r-1); exact identity
    if r >= 2:
        row = (a.sum(axis=1) - diag) / (r - 1)
        row_gap = float(np.abs(row - diag).max())
        row_slack = 1e-10 * max(1.0, float(diag.max())) - row_gap
        row_check = BoundCheck(
            "row-identity", "pass" if row_slack >= 0 else "fail", row_slack
        )
    else:
        row_check = BoundCheck("row-identity", "skipped", detail="r < 2")

    logdet_a = logdet_pd(mat)
    ap = 0.5 * math.exp(2.0 * delta_hat) * big
    comparison = aI_bJ_logdet(ap * math.comb(n - 2, r - 1), ap * math.comb(n - 2, r - 2), n)
    # at delta_hat = 0 the two matrices coincide and the two log-determinant
    # routes differ only by rounding; allow that much
    slack_det = float(comparison - logdet_a)
    det_tol = 1e-10 * max(1.0, abs(comparison))

    inv = np.linalg.inv(a)
    scale = big * math.comb(n - 1, r - 1) * math.exp(-35.0 * delta_hat)
    measured_diag = float(np.abs(np.diag(inv)).max() * scale)
    measured_off = float(np.abs(inv[~np.eye(n, dtype=bool)]).max() * scale * n)

    checks = [
        BoundCheck("offdiag-entry-ratio", "pass" if slack_off >= 0 else "fail", slack_off),
        BoundCheck("diag-entry-ratio", "pass" if slack_diag >= 0 else "fail", slack_diag),
        BoundCheck("offdiag-sandwich", "pass" if slack_off_sand >= 0 else "fail", slack_off_sand),
        BoundCheck("diag-sandwich", "pass" if slack_diag_sand >= 0 else "fail", slack_diag_sand),
        row_check,
        BoundCheck(
            "determinant-comparison",
            "pass" if slack_det >= -det_tol else "fail",
            slack_det,
        ),
    ]
    return MatrixBoundReport(
        checks=checks,
        measured_inverse_constant=measured_diag,
        measured_offdiag_constant=measured_off,
    )
