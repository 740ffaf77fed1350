import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import gammaln

from hyperdeg.core import DegreeSequence
from hyperdeg.errors import ExpansionDomainError
from hyperdeg.models import (
    HypergeomSpec,
    conditioned_sum_log_prob,
    conditioning_factor_report,
    hypergeom_pmf,
    measured_ratio,
    predicted_ratio,
    prob_model,
    sample_degree_batch,
    sample_degrees,
    stirling_log_binom,
    tail_bound_report,
)
from hyperdeg.oracle import exact_count

TINY = DegreeSequence(4, 3, (2, 2, 1, 1))
REG6 = DegreeSequence(6, 3, (5,) * 6)


def _compositions(total, parts, cap):
    if parts == 1:
        if 0 <= total <= cap:
            yield (total,)
        return
    for head in range(min(total, cap) + 1):
        for rest in _compositions(total - head, parts - 1, cap):
            yield (head,) + rest


def test_pmf_examples():
    spec = HypergeomSpec(4, 3, 2)
    assert hypergeom_pmf(spec, 1) == pytest.approx(0.5, abs=1e-14)
    assert hypergeom_pmf(spec, 0) == 0.0
    assert hypergeom_pmf(spec, 3) == 0.0


def test_pmf_normalizes_and_matches_moments():
    spec = HypergeomSpec(6, 3, 10)
    pmf = np.array([hypergeom_pmf(spec, k) for k in range(spec.marked + 1)])
    assert pmf.sum() == pytest.approx(1.0, abs=1e-12)
    ks = np.arange(spec.marked + 1)
    assert (pmf * ks).sum() == pytest.approx(spec.mean, abs=1e-10)
    var = (pmf * (ks - spec.mean) ** 2).sum()
    assert var == pytest.approx(spec.variance, rel=1e-10)


def test_variance_closed_forms_agree():
    for n, r, m in [(6, 3, 10), (7, 3, 12), (8, 4, 20)]:
        spec = HypergeomSpec(n, r, m)
        d = spec.mean
        lam = d / spec.marked
        q = (1 - lam) * (n - r) * d
        alt = (q / n) / (1.0 - 1.0 / spec.population)
        assert spec.variance == pytest.approx(alt, rel=1e-12)


def test_conditioned_sum_dp_exact_value():
    # Z in {1, 2} each with probability 1/2; four copies summing to 6
    spec = HypergeomSpec(4, 3, 2)
    assert math.exp(conditioned_sum_log_prob(spec, 4, 6, "dp")) == pytest.approx(
        0.375, abs=1e-12
    )


def test_conditioned_sum_clt_center_formula():
    spec = HypergeomSpec(6, 3, 10)
    got = conditioned_sum_log_prob(spec, 6, 30, "clt")
    sigma = math.sqrt(spec.variance)
    assert got == pytest.approx(-math.log(sigma * math.sqrt(2 * math.pi * 6)), abs=1e-12)


def test_dp_and_clt_close_at_desk_scale():
    spec = HypergeomSpec(6, 3, 10)
    dp = conditioned_sum_log_prob(spec, 6, 30, "dp")
    clt = conditioned_sum_log_prob(spec, 6, 30, "clt")
    assert abs(dp - clt) <= 0.2


def test_prob_model_values():
    b = prob_model(TINY, "B")
    assert b.ln_prob == pytest.approx(math.log(81 / 924), abs=1e-12)

    d_exact = prob_model(TINY, "D-exact")
    assert d_exact.ln_prob == pytest.approx(math.log(1 / 6), abs=1e-12)
    assert d_exact.components["exact"] == Fraction(1, 6)

    t = prob_model(TINY, "T", normalizer="dp")
    assert t.ln_prob == pytest.approx(math.log(1 / 6), abs=1e-12)
    assert t.components["normalizer_method"] == "dp"

    d_asym = prob_model(REG6, "D-asymptotic")
    assert math.isfinite(d_asym.ln_prob)
    assert d_asym.ln_prob <= 0.0
    via_general = prob_model(REG6, "D-asymptotic", estimate_method="general")
    assert via_general.components["estimate_method"] == "general"
    assert via_general.ln_prob == pytest.approx(d_asym.ln_prob, abs=1e-10)

    t_clt = prob_model(TINY, "T", normalizer="clt")
    assert t_clt.components["normalizer_method"] == "clt"
    assert abs(t_clt.ln_prob - t.ln_prob) <= 0.2


def test_b_model_sums_to_one():
    for n, r, m in [(4, 3, 2), (5, 3, 3)]:
        cap = math.comb(n - 1, r - 1)
        total = 0.0
        for degrees in _compositions(r * m, n, cap):
            total += math.exp(prob_model(DegreeSequence(n, r, degrees), "B").ln_prob)
        assert total == pytest.approx(1.0, abs=1e-10)


def test_t_model_sums_to_one():
    for n, r, m in [(4, 3, 2), (5, 3, 3)]:
        cap = math.comb(n - 1, r - 1)
        total = 0.0
        for degrees in _compositions(r * m, n, cap):
            total += math.exp(
                prob_model(DegreeSequence(n, r, degrees), "T", normalizer="dp").ln_prob
            )
        assert total == pytest.approx(1.0, abs=1e-10)


def test_exact_model_ratio_is_an_algebraic_identity():
    """ln Prob_D - ln Prob_T must equal the directly assembled ratio."""
    for seq in (TINY, DegreeSequence(5, 3, (3, 3, 2, 2, 2)), REG6):
        n, r = seq.n, seq.r
        m = seq.edge_count
        marked = math.comb(n - 1, r - 1)
        population = math.comb(n, r)
        via_models = (
            prob_model(seq, "D-exact").ln_prob
            - prob_model(seq, "T", normalizer="dp").ln_prob
        )
        spec = HypergeomSpec(n, r, m)
        ln_p = conditioned_sum_log_prob(spec, n, r * m, "dp")
        direct = (
            math.log(exact_count(seq).value)
            + (n - 1) * math.log(math.comb(population, m))
            + ln_p
        )
        for dj in seq.degrees:
            direct -= math.log(math.comb(marked, dj))
            direct -= math.log(math.comb(population - marked, m - dj))
        assert via_models == pytest.approx(direct, abs=1e-9)


def test_predicted_ratios_regular_values():
    dvst = predicted_ratio(REG6, "d-vs-t")
    assert dvst["predicted_ln_ratio"] == pytest.approx(2.5 * math.log(5 / 6), abs=1e-12)
    bvsd = predicted_ratio(REG6, "b-vs-d")
    assert bvsd["predicted_ln_ratio"] == pytest.approx(2.5 * math.log(5 / 3), abs=1e-12)
    klw = predicted_ratio(REG6, "klw")
    assert klw["predicted_ln_ratio"] == pytest.approx(1.0, abs=1e-12)
    klw4 = predicted_ratio(DegreeSequence(8, 4, (10,) * 8), "klw")
    assert klw4["predicted_ln_ratio"] == pytest.approx(1.5, abs=1e-12)


def test_measured_ratio_gap_shrinks_with_n():
    """Gap between measured and predicted D/T log-ratio, exact H and dp
    normalizer; frozen from measured runs on the half-density family."""
    gaps = []
    for n, d in [(5, 3), (6, 5), (7, 6)]:
        seq = DegreeSequence(n, 3, (d,) * n)
        measured = measured_ratio(seq, "d-vs-t", normalizer="dp", d_model="D-exact")
        predicted = predicted_ratio(seq, "d-vs-t")["predicted_ln_ratio"]
        gaps.append(abs(measured - predicted))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps == pytest.approx([0.414765, 0.266572, 0.219191], abs=1e-5)


def test_stirling_binom_accuracy():
    def exact(k_, x_):
        return float(
            gammaln(k_ + 1) - gammaln(x_ + 1) - gammaln(k_ - x_ + 1)
        )

    for big_k, lam, x in [(10**4, 0.5, 0.0), (10**4, 0.5, 50.0), (10**6, 0.3, 500.0)]:
        got = stirling_log_binom(big_k, lam, x)
        want = exact(big_k, lam * big_k + x)
        assert abs(got - want) <= 1e-6 * abs(want)


def test_stirling_binom_even_in_x_at_half_density():
    up = stirling_log_binom(10**4, 0.5, 40.0)
    down = stirling_log_binom(10**4, 0.5, -40.0)
    assert up == pytest.approx(down, abs=1e-12)


def test_stirling_binom_domain_error():
    with pytest.raises(ExpansionDomainError):
        stirling_log_binom(100.0, 0.0, 0.0)


def test_sampler_edge_cases_and_determinism():
    assert sample_degrees(6, 3, 0, 1) == (0,) * 6
    assert sample_degrees(6, 3, 20, 1) == (10,) * 6
    assert sample_degrees(6, 3, 10, 42) == sample_degrees(6, 3, 10, 42)
    batch = sample_degree_batch(6, 3, 10, 7, 64)
    assert (batch.sum(axis=1) == 30).all()
    assert np.array_equal(batch, sample_degree_batch(6, 3, 10, 7, 64))


def test_sampler_regular_rate_matches_exact_model():
    """10^5 samples at the pinned seed: empirical regular-sequence rate
    within 3 standard errors of the exact model probability."""
    batch = sample_degree_batch(6, 3, 10, 42, 100000)
    empirical = float((batch == 5).all(axis=1).mean())
    p = 1044 / math.comb(20, 10)
    se = math.sqrt(p * (1 - p) / 100000)
    assert abs(empirical - p) <= 3 * se


def test_sampler_marginal_matches_pmf():
    spec = HypergeomSpec(6, 3, 10)
    batch = sample_degree_batch(6, 3, 10, 11, 20000)
    emp = np.bincount(batch[:, 0], minlength=11) / 20000
    for k in range(11):
        p = hypergeom_pmf(spec, k)
        se = math.sqrt(max(p * (1 - p), 1e-12) / 20000)
        assert abs(emp[k] - p) <= 5 * se


def test_tail_bound_holds_everywhere():
    spec = HypergeomSpec(6, 3, 10)
    report = tail_bound_report(spec, range(1, 16))
    assert all(row["holds"] for row in report)


def test_conditioning_factor_close_to_gaussian():
    spec = HypergeomSpec(6, 3, 10)
    sigma = math.sqrt(spec.variance)
    ys = range(int(5 - 3 * sigma), int(5 + 3 * sigma) + 1)
    report = conditioning_factor_report(spec, 6, ys)
    assert all(row["abs_gap"] <= 0.25 for row in report)
