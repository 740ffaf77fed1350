"""Edge weights of the maximum-entropy model and their subset sums.

Given a vertex parameter vector beta, each r-subset W carries the weight
``lambda_W = logistic(sum_{j in W} beta_j)``, the probability that W is an
edge.  This module sweeps the full r-subset family once and accumulates the
per-vertex sums, per-pair variance weights, the average weight, the average
variance weight, the entropy sum, and the log-prefactor of the exact
coefficient-extraction identity.

All sweeps run over fixed 4096-subset colex chunks, with per-chunk numpy
arithmetic and twofold-compensated combination in chunk order, so results do
not depend on the worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .budgets import check_subset_budget
from .core import DegreeSequence
from .parallel import Twofold, map_chunks
from .subsets import CHUNK, all_subsets, iter_chunks

LOG_2PI = math.log(2.0 * math.pi)


@dataclass
class BetaVector:
    """A candidate or solved parameter vector.

    ``spread`` is always recomputed from the entries; it is never cached.
    """

    beta: np.ndarray
    residual_inf: float | None = None

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=np.float64)

    @property
    def spread(self) -> float:
        b = self.beta
        return float(b.max() - b.min()) if b.size else 0.0

    def __len__(self) -> int:
        return int(self.beta.size)


def as_beta_array(beta, n: int | None = None) -> np.ndarray:
    arr = beta.beta if isinstance(beta, BetaVector) else np.asarray(beta, dtype=np.float64)
    arr = np.atleast_1d(np.asarray(arr, dtype=np.float64))
    if n is not None and arr.size != n:
        raise ValueError(f"beta has {arr.size} entries, expected {n}")
    return arr


def logistic(s):
    """Numerically stable logistic, elementwise, valued in (0, 1)."""
    s = np.asarray(s, dtype=np.float64)
    out = np.empty_like(s)
    pos = s >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-s[pos]))
    es = np.exp(s[~pos])
    out[~pos] = es / (1.0 + es)
    return out


def softplus(s):
    """log(1 + e^s) without overflow."""
    s = np.asarray(s, dtype=np.float64)
    return np.maximum(s, 0.0) + np.log1p(np.exp(-np.abs(s)))


def lambda_of_subset(beta, subset: Sequence[int]) -> float:
    """Edge weight of one subset: logistic of its beta sum."""
    arr = as_beta_array(beta)
    idx = np.asarray(list(subset), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= arr.size):
        raise ValueError("subset not contained in the vertex set")
    s = float(arr[idx].sum())
    return float(logistic(s))


@dataclass
class FieldSummary:
    """Subset sums observed at one beta.

    ``pair_weights`` is symmetric; its diagonal holds the per-vertex
    variance-weight sums, the off-diagonal entries the per-pair sums.
    """

    n: int
    r: int
    vertex_sums: np.ndarray
    pair_weights: np.ndarray
    avg_lambda: float
    big_lambda: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "vertex_sums": self.vertex_sums.tolist(),
            "pair_weights": self.pair_weights.tolist(),
            "avg_lambda": self.avg_lambda,
            "big_lambda": self.big_lambda,
        }


def _field_chunk(args):
    idx, beta = args
    s = beta[idx].sum(axis=1)
    lam = logistic(s)
    # variance weight as a product of the two logistic branches, never
    # as lam - lam**2, to keep accuracy near weights 0 and 1
    q = lam * logistic(-s)
    n = beta.size
    vertex_lam = np.zeros(n)
    vertex_q = np.zeros(n)
    pair_q = np.zeros((n, n))
    r = idx.shape[1]
    for a in range(r):
        np.add.at(vertex_lam, idx[:, a], lam)
        np.add.at(vertex_q, idx[:, a], q)
        for b in range(a + 1, r):
            np.add.at(pair_q, (idx[:, a], idx[:, b]), q)
    return lam.sum(), q.sum(), vertex_lam, vertex_q, pair_q


def field_summary(
    beta,
    n: int,
    r: int,
    budget: int | None = None,
    threads: int | None = None,
) -> FieldSummary:
    """One deterministic sweep over all C(n, r) subsets."""
    arr = as_beta_array(beta, n)
    total = math.comb(n, r)
    check_subset_budget(total, budget)

    sum_lam = Twofold(0.0)
    sum_q = Twofold(0.0)
    vertex_lam = Twofold(np.zeros(n))
    vertex_q = Twofold(np.zeros(n))
    pair_q = Twofold(np.zeros((n, n)))

    def combine(_, result):
        cl, cq, vl, vq, pq = result
        sum_lam.add(cl)
        sum_q.add(cq)
        vertex_lam.add(vl)
        vertex_q.add(vq)
        pair_q.add(pq)

    map_chunks(
        ((idx, arr) for idx in iter_chunks(n, r, CHUNK)),
        _field_chunk,
        combine,
        threads=threads,
    )

    pw = pair_q.value()
    pw = pw + pw.T
    np.fill_diagonal(pw, vertex_q.value())
    return FieldSummary(
        n=n,
        r=r,
        vertex_sums=vertex_lam.value(),
        pair_weights=pw,
        avg_lambda=sum_lam.value() / total,
        big_lambda=sum_q.value() / total,
    )


def _entropy_chunk(args):
    idx, beta = args
    s = beta[idx].sum(axis=1)
    lam = logistic(s)
    # -lam*log(lam) - (1-lam)*log(1-lam) == softplus(s) - lam*s
    return (float((softplus(s) - lam * s).sum()),)


def entropy_sum(
    beta,
    n: int,
    r: int,
    budget: int | None = None,
    threads: int | None = None,
) -> float:
    """Sum over subsets of the binary entropy of the edge weight.

    This is the natural log of the product factor in the general counting
    formula.
    """
    arr = as_beta_array(beta, n)
    check_subset_budget(math.comb(n, r), budget)
    acc = Twofold(0.0)
    map_chunks(
        ((idx, arr) for idx in iter_chunks(n, r, CHUNK)),
        _entropy_chunk,
        lambda _, res: acc.add(res[0]),
        threads=threads,
    )
    return acc.value()


@dataclass
class PrefactorResult:
    value: float
    discrepancy: float


def log_prefactor(
    beta,
    seq: DegreeSequence,
    budget: int | None = None,
    threads: int | None = None,
) -> PrefactorResult:
    """Log of the coefficient-extraction prefactor, by both algebraic forms.

    The direct form is ``-n log(2 pi) - sum_j beta_j d_j + sum_W
    log(1 + e^{s_W})``; the entropy form replaces the last two terms by the
    subset entropy sum.  The two agree exactly only when beta solves the
    degree system, so their absolute difference is returned as a residual
    diagnostic.  The entropy form is the reported value.
    """
    arr = as_beta_array(beta, seq.n)
    n, r = seq.n, seq.r
    check_subset_budget(math.comb(n, r), budget)

    soft = Twofold(0.0)
    ent = Twofold(0.0)

    def chunk_fn(args):
        idx, b = args
        s = b[idx].sum(axis=1)
        lam = logistic(s)
        sp = softplus(s)
        return float(sp.sum()), float((sp - lam * s).sum())

    def combine(_, res):
        soft.add(res[0])
        ent.add(res[1])

    map_chunks(
        ((idx, arr) for idx in iter_chunks(n, r, CHUNK)),
        chunk_fn,
        combine,
        threads=threads,
    )
    degree_dot = float(arr @ np.asarray(seq.degrees, dtype=np.float64))
    direct = -n * LOG_2PI - degree_dot + soft.value()
    entropy_form = -n * LOG_2PI + ent.value()
    return PrefactorResult(
        value=entropy_form, discrepancy=abs(direct - entropy_form)
    )


@dataclass
class BoundCheck:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    slack: float | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def check_weight_ratio_bounds(
    beta,
    n: int,
    r: int,
    delta_hat: float,
    budget: int | None = None,
) -> list[BoundCheck]:
    """Weight-ratio inequalities at spread at most delta_hat / r.

    Checks, with s = spread(beta) * r <= delta_hat required:

    * for all subsets W, W': |log(lambda_W / lambda_W')| and
      |log((1-lambda_W) / (1-lambda_W'))| at most
      delta_hat * (1 - |W cap W'| / r);
    * for all W: |log(lambda_W / avg)| <= delta_hat and
      |log(weight variance ratio)| <= 2 * delta_hat;
    * if avg <= 7/8: e^{-delta_hat}/256 * avg <= big_lambda <= avg.

    If the spread precondition fails, every check is reported as skipped.
    """
    arr = as_beta_array(beta, n)
    total = math.comb(n, r)
    check_subset_budget(total * total, budget)
    spread = float(arr.max() - arr.min())
    if spread * r > delta_hat * (1 + 1e-12):
        return [
            BoundCheck(name, "skipped", detail="spread*r exceeds delta_hat")
            for name in (
                "pair-ratio-lambda",
                "pair-ratio-complement",
                "ratio-to-average",
                "variance-ratio-to-average",
                "average-vs-variance-average",
            )
        ]

    subsets = all_subsets(n, r)
    inc = np.zeros((total, n))
    np.put_along_axis(inc, subsets, 1.0, axis=1)
    s = inc @ arr
    lam = logistic(s)
    one_minus = logistic(-s)
    overlap = inc @ inc.T  # |W cap W'| for every pair
    allowance = delta_hat * (1.0 - overlap / r)

    log_lam = np.log(lam)
    log_one = np.log(one_minus)
    gap_lam = np.abs(log_lam[:, None] - log_lam[None, :])
    gap_one = np.abs(log_one[:, None] - log_one[None, :])
    slack_lam = float((allowance - gap_lam).min())
    slack_one = float((allowance - gap_one).min())

    avg = float(lam.mean())
    big = float((lam * one_minus).mean())
    gap_avg = np.abs(log_lam - math.log(avg))
    slack_avg = float(delta_hat - gap_avg.max())
    gap_var = np.abs(np.log(lam * one_minus) - math.log(big))
    slack_var = float(2.0 * delta_hat - gap_var.max())

    checks = [
        BoundCheck("pair-ratio-lambda", "pass" if slack_lam >= 0 else "fail", slack_lam),
        BoundCheck("pair-ratio-complement", "pass" if slack_one >= 0 else "fail", slack_one),
        BoundCheck("ratio-to-average", "pass" if slack_avg >= 0 else "fail", slack_avg),
        BoundCheck(
            "variance-ratio-to-average", "pass" if slack_var >= 0 else "fail", slack_var
        ),
    ]
    if avg <= 7.0 / 8.0:
        lower = math.exp(-delta_hat) / 256.0 * avg
        slack = min(big - lower, avg - big)
        checks.append(
            BoundCheck(
                "average-vs-variance-average",
                "pass" if slack >= 0 else "fail",
                float(slack),
            )
        )
    else:
        checks.append(
            BoundCheck(
                "average-vs-variance-average", "skipped", detail="avg weight > 7/8"
            )
        )
    return checks
