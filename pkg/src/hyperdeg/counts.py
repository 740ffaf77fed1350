"""Asymptotic counting formulas and the four-quadrant audit.

Three evaluation routes are provided:

* the general formula, which needs a solved parameter vector and the
  log-determinant of the assembled weight matrix;
* the near-regular closed formula, which needs no solve and is exactly
  invariant under both complement symmetries;
* the first-quadrant corollary form, which replaces the assembled
  determinant by the regular closed form plus degree-deviation corrections.

All values are natural logs of estimated counts.  The error indicators are
the formulas' error terms evaluated with implicit constant 1; they are
indicators, not bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DegreeSequence,
    DerivedParams,
    QuadrantTransform,
    apply_symmetry,
    canonicalize_first_quadrant,
    derive,
)
from .errors import DensityDegenerate
from .fields import entropy_sum, lambda_of_subset
from .matrices import assemble_weight_matrix, logdet_pd, regular_closed_form
from .solver import SolveReport, apply_beta_symmetry, require_converged, solve
from .subsets import colex_unrank


@dataclass
class LogEstimate:
    ln_value: float
    method: str  # "general" | "near-regular" | "corollary"
    error_terms: dict = field(default_factory=dict)
    assumption_flags: dict = field(default_factory=dict)

    @property
    def log10_value(self) -> float:
        return self.ln_value / math.log(10.0)

    def to_json_dict(self) -> dict:
        return {
            "ln": self.ln_value,
            "log10": self.log10_value,
            "method": self.method,
            "error_terms": self.error_terms,
            "flags": self.assumption_flags,
        }


def error_indicators(params: DerivedParams) -> dict:
    """The error-term summands with implicit constant 1."""
    n, r, q = params.n, params.r, params.q
    if q <= 0:
        return {"q_term": math.inf, "log_power_term": math.inf, "superpoly_term": 0.0}
    log_n = math.log(n)
    return {
        "q_term": r**2 * (n - r) ** 2 / q,
        "log_power_term": (
            r**6 * (n - r) ** 6 * log_n**9 / (n**3.5 * q**1.5)
        ),
        "superpoly_term": n ** (-log_n),
    }


def _near_regular_extra(params: DerivedParams) -> float:
    q, n = params.q, params.n
    return params.delta_max * n**0.6 * q ** (-0.6) if q > 0 else math.inf


def _corollary_extra(params: DerivedParams) -> float:
    d = params.d
    return params.delta_max * d ** (-0.6) if d > 0 else math.inf


def _xlnx_entropy(lam: float) -> float:
    """lambda*ln(lambda) + (1-lambda)*ln(1-lambda), 0 at the endpoints."""
    out = 0.0
    if 0.0 < lam < 1.0:
        out = lam * math.log(lam) + (1.0 - lam) * math.log(1.0 - lam)
    return out


def _flags(params: DerivedParams) -> dict:
    return {
        "edge_size_in_range": params.flags["edge_size_in_range"],
        "main_growth": params.flags["main_growth"],
        "near_regular": params.flags["near_regular"],
        "first_quadrant": params.flags["first_quadrant"],
    }


def estimate_general(
    seq: DegreeSequence,
    report: SolveReport | None = None,
    tol: float = 1e-10,
    budget: int | None = None,
    threads: int | None = None,
) -> LogEstimate:
    """General-formula estimate: solve, assemble, take logs.

    The instance is moved to the first quadrant before evaluation; a given
    solve report is transported there by the exact solution symmetry, so no
    re-solve happens.  The reported value is frame-independent.
    """
    params = derive(seq)
    if not (0.0 < params.lam < 1.0):
        raise DensityDegenerate("empty or complete instance; use the exact oracle")
    canonical, transform = canonicalize_first_quadrant(seq)
    if report is None:
        report = solve(canonical, tol=tol, budget=budget, threads=threads)
        beta = report.beta_star.beta
    else:
        require_converged(report)
        beta = apply_beta_symmetry(
            report.beta_star.beta, transform, seq.n, seq.r
        )
    n, r = canonical.n, canonical.r
    matrix = assemble_weight_matrix(beta, n, r, budget=budget, threads=threads)
    ln_value = (
        math.log(r)
        - n * math.log(2.0)
        - 0.5 * n * math.log(math.pi)
        - 0.5 * logdet_pd(matrix)
        + entropy_sum(beta, n, r, budget=budget, threads=threads)
    )
    return LogEstimate(
        ln_value=ln_value,
        method="general",
        error_terms=error_indicators(params),
        assumption_flags=_flags(params),
    )


def estimate_near_regular(seq: DegreeSequence) -> LogEstimate:
    """Closed near-regular formula; no solve, invariant in all quadrants.

    ``ln H = (1/2) ln( r (n-r) (n-1)^{n-1} / (2^n pi^n Q^n) )
             - C(n, r) (lam ln lam + (1-lam) ln(1-lam))
             - (n-1) R2 / (2Q) + n^2 R2 / (4Q^2)
             + (1-2 lam)(n-2r) n R3 / (6Q^2) - n^3 R4 / (12Q^3)``.
    """
    params = derive(seq)
    n, r = params.n, params.r
    lam, q = params.lam, params.q
    if not (0.0 < lam < 1.0):
        raise DensityDegenerate("empty or complete instance; use the exact oracle")
    prefactor = 0.5 * (
        math.log(r)
        + math.log(n - r)
        + (n - 1) * math.log(n - 1)
        - n * math.log(2.0)
        - n * math.log(math.pi)
        - n * math.log(q)
    )
    entropy = -math.comb(n, r) * _xlnx_entropy(lam)
    r2, r3, r4 = params.r2, params.r3, params.r4
    corrections = (
        -(n - 1) * r2 / (2.0 * q)
        + n**2 * r2 / (4.0 * q**2)
        + (1.0 - 2.0 * lam) * (n - 2 * r) * n * r3 / (6.0 * q**2)
        - n**3 * r4 / (12.0 * q**3)
    )
    terms = error_indicators(params)
    terms["near_regular_term"] = _near_regular_extra(params)
    return LogEstimate(
        ln_value=prefactor + entropy + corrections,
        method="near-regular",
        error_terms=terms,
        assumption_flags=_flags(params),
    )


def estimate_corollary(seq: DegreeSequence) -> LogEstimate:
    """First-quadrant corollary form with the regular determinant.

    Inputs outside the first quadrant are canonicalized first; the returned
    value is the canonical instance's, which equals the input's count.
    """
    canonical, _ = canonicalize_first_quadrant(seq)
    params = derive(canonical)
    n, r = params.n, params.r
    lam, d = params.lam, params.d
    if not (0.0 < lam < 1.0):
        raise DensityDegenerate("empty or complete instance; use the exact oracle")
    _, logdet0 = regular_closed_form(params)
    r2, r3, r4 = params.r2, params.r3, params.r4
    corrections = (
        -(n - 1) * r2 / (2.0 * (1.0 - lam) * (n - r) * d)
        + r2 / (4.0 * d**2)
        + (1.0 - 2.0 * lam) * r3 / (6.0 * (1.0 - lam) ** 2 * d**2)
        - r4 / (12.0 * d**3)
    )
    ln_value = (
        math.log(r)
        - n * math.log(2.0)
        - 0.5 * n * math.log(math.pi)
        - 0.5 * logdet0
        - math.comb(n, r) * _xlnx_entropy(lam)
        + corrections
    )
    terms = error_indicators(params)
    terms["near_regular_term"] = _corollary_extra(params)
    return LogEstimate(
        ln_value=ln_value,
        method="corollary",
        error_terms=terms,
        assumption_flags=_flags(params),
    )


@dataclass
class QuadrantAudit:
    ln_values: dict
    max_ln_gap: float
    det_ratio_checks: dict
    lambda_identity_gap: float

    def to_json_dict(self) -> dict:
        return {
            "ln_values": self.ln_values,
            "max_ln_gap": self.max_ln_gap,
            "det_ratio_checks": self.det_ratio_checks,
            "lambda_identity_gap": self.lambda_identity_gap,
        }


def symmetry_audit(
    seq: DegreeSequence,
    tol: float = 1e-10,
    spot_checks: int = 100,
    rng_seed: int = 2024,
    budget: int | None = None,
    threads: int | None = None,
) -> QuadrantAudit:
    """Solve all four quadrant images and compare the general estimates.

    Also verifies the determinant ratios ((n-r)/r)^2 between images and
    spot-checks the edge-weight transfer identities on random subsets.
    """
    n, r = seq.n, seq.r
    base_report = solve(seq, tol=tol, budget=budget, threads=threads)
    base_beta = base_report.beta_star.beta
    base_logdet = logdet_pd(
        assemble_weight_matrix(base_beta, n, r, budget=budget, threads=threads)
    )

    ln_values: dict = {}
    det_checks: dict = {}
    lambda_gap = 0.0
    rng = np.random.default_rng(rng_seed)

    for t in QuadrantTransform:
        image = apply_symmetry(seq, t)
        seed = apply_beta_symmetry(base_beta, t, n, r)
        report = solve(image, seed_beta=seed, tol=tol, budget=budget, threads=threads)
        estimate = estimate_general(
            image, report=report, budget=budget, threads=threads
        )
        ln_values[t.value] = estimate.ln_value

        image_beta = report.beta_star.beta
        image_logdet = logdet_pd(
            assemble_weight_matrix(
                image_beta, image.n, image.r, budget=budget, threads=threads
            )
        )
        if t in (QuadrantTransform.EDGE_COMPLEMENT, QuadrantTransform.BOTH):
            expected = base_logdet + 2.0 * math.log((n - r) / r)
        else:
            expected = base_logdet
        det_checks[t.value] = {
            "logdet": image_logdet,
            "expected": expected,
            "rel_gap": abs(image_logdet - expected) / max(1.0, abs(expected)),
        }

        # weight transfer: full subsets map to complements under the
        # edge-size-changing transforms, and weights to 1 - weight under
        # the set complement
        total = math.comb(n, r)
        picks = rng.integers(0, total, size=min(spot_checks, total))
        for rank in picks:
            w = colex_unrank(int(rank), n, r)
            lw = lambda_of_subset(base_beta, w)
            comp = tuple(sorted(set(range(n)) - set(w)))
            if t is QuadrantTransform.IDENTITY:
                other = lambda_of_subset(image_beta, w)
                expected_lw = lw
            elif t is QuadrantTransform.EDGE_COMPLEMENT:
                other = lambda_of_subset(image_beta, comp)
                expected_lw = lw
            elif t is QuadrantTransform.SET_COMPLEMENT:
                other = lambda_of_subset(image_beta, w)
                expected_lw = 1.0 - lw
            else:
                other = lambda_of_subset(image_beta, comp)
                expected_lw = 1.0 - lw
            lambda_gap = max(lambda_gap, abs(other - expected_lw))

    values = list(ln_values.values())
    max_gap = max(abs(a - b) for a in values for b in values)
    return QuadrantAudit(
        ln_values=ln_values,
        max_ln_gap=max_gap,
        det_ratio_checks=det_checks,
        lambda_identity_gap=lambda_gap,
    )
