"""Acceptance suite: one test per criterion, one printed line per criterion.

Criteria 6 and 10 are implemented exactly as stated and are expected to
fail: the stated instance family (half-density regular sequences with
r = 3 at n = 8 and n = 12) does not exist in integers, and the exact
counts they require at n = 10 and n = 12 exceed any feasible enumeration
budget.  See notes in the repository root README.  Everything else passes.
"""

import io
import math
import os
import time
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

from hyperdeg.cli import run as cli_run
from hyperdeg.core import (
    DegreeSequence,
    QuadrantTransform,
    apply_symmetry,
    derive,
)
from hyperdeg.counts import estimate_general, estimate_near_regular, symmetry_audit
from hyperdeg.errors import (
    BudgetExceeded,
    DensityDegenerate,
    NonConvergence,
    SingularJacobian,
)
from hyperdeg.fields import check_weight_ratio_bounds, field_summary
from hyperdeg.identities import selftest as identities_selftest
from hyperdeg.matrices import assemble_weight_matrix, bound_suite, logdet_pd
from hyperdeg.models import (
    HypergeomSpec,
    measured_ratio,
    predicted_ratio,
    prob_model,
    stirling_log_binom,
    tail_bound_report,
)
from hyperdeg.oracle import cauchy_quadrature, exact_count, total_identity_check
from hyperdeg.solver import initial_beta, solve, uniqueness_diagnostic

INSTANCES = Path(__file__).resolve().parent.parent / "demos" / "instances"


def report(number: int, name: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"acceptance {number:02d} {name}: {status}{suffix}")


def _compositions(total, parts, cap):
    if parts == 1:
        if 0 <= total <= cap:
            yield (total,)
        return
    for head in range(min(total, cap) + 1):
        for rest in _compositions(total - head, parts - 1, cap):
            yield (head,) + rest


def test_criterion_01_exact_oracle_completeness():
    start = time.time()
    checked = []
    for n, r, max_m in [(4, 3, 4), (5, 3, 4), (6, 3, 3)]:
        for m in range(max_m + 1):
            checked.append(total_identity_check(n, r, m))
    elapsed = time.time() - start
    ok = all(checked) and elapsed < 60.0
    report(1, "exact-oracle completeness", ok, f"{len(checked)} identities, {elapsed:.1f}s")
    assert all(checked)
    assert elapsed < 60.0


def _solved_or_fallback_contour(seq):
    params = derive(seq)
    try:
        return solve(seq, max_iter=60).beta_star.beta
    except (NonConvergence, SingularJacobian, DensityDegenerate):
        if 0.0 < params.lam < 1.0:
            return initial_beta(seq, "regular")[0].beta
        return None


def test_criterion_02_cauchy_integral_identity():
    start = time.time()
    worst = 0.0
    cases = 0

    def check(seq):
        nonlocal worst, cases
        exact = exact_count(seq).value
        second = _solved_or_fallback_contour(seq)
        contours = [np.zeros(seq.n)] + ([second] if second is not None else [])
        for beta in contours:
            value = cauchy_quadrature(seq, beta=beta).value
            gap = abs(value - exact) / max(1.0, exact)
            worst = max(worst, gap)
            assert gap <= 1e-8, (seq, exact, value)
            cases += 1

    for degrees in product(range(4), repeat=4):
        if sum(degrees) % 3 == 0:
            check(DegreeSequence(4, 3, degrees))

    rng = np.random.default_rng(5)
    seen = set()
    while len(seen) < 10:
        degrees = tuple(int(x) for x in rng.integers(0, 7, size=5))
        if sum(degrees) % 3 or degrees in seen:
            continue
        seen.add(degrees)
        check(DegreeSequence(5, 3, degrees))

    elapsed = time.time() - start
    report(2, "coefficient-integral identity", elapsed < 120.0,
           f"{cases} evaluations, worst gap {worst:.2e}, {elapsed:.1f}s")
    assert elapsed < 120.0


def test_criterion_03_regular_closed_form():
    seq = DegreeSequence(6, 3, (5,) * 6)
    rep = solve(seq)
    det = math.exp(logdet_pd(assemble_weight_matrix(rep.beta_star.beta, 6, 3)))
    general = estimate_general(seq, report=rep).ln_value
    near = estimate_near_regular(seq).ln_value
    ok = (
        rep.iterations <= 1
        and rep.residual_inf <= 1e-12 * 5.0
        and np.array_equal(rep.beta_star.beta, np.zeros(6))
        and abs(det - 0.889892578125) <= 1e-12 * 0.889892578125
        and abs(general - near) <= 1e-10
    )
    report(3, "regular closed form", ok,
           f"iters={rep.iterations}, |A|={det:.12f}, |gap|={abs(general-near):.1e}")
    assert ok


def _random_near_regular(rng, n_choices=(6, 8, 10)):
    """Degree sequence of a uniformly random hypergraph, kept when it is
    near-regular (delta_max <= d^{3/5}) and inside the existence regime
    (degree log-spread at most 1/r, in both complement frames)."""
    from hyperdeg.models import sample_degrees

    while True:
        n = int(rng.choice(list(n_choices)))
        total = math.comb(n, 3)
        m = int(rng.integers(total // 4, 3 * total // 4))
        seq = DegreeSequence(n, 3, sample_degrees(n, 3, m, None, rng=rng))
        params = derive(seq)
        mirror = derive(apply_symmetry(seq, QuadrantTransform.SET_COMPLEMENT))
        if params.delta_max > params.d**0.6:
            continue
        if params.flags["degree_spread_ok"] and mirror.flags["degree_spread_ok"]:
            return seq


def test_criterion_04_solver_certification():
    rng = np.random.default_rng(404)
    worst_residual = 0.0
    min_diag = math.inf
    for _ in range(50):
        seq = _random_near_regular(rng)
        params = derive(seq)
        assert params.delta_max <= params.d**0.6
        rep = solve(seq)
        assert rep.converged
        assert rep.residual_inf <= 1e-10 * params.d
        worst_residual = max(worst_residual, rep.residual_inf / params.d)
        perturbed = rep.beta_star.beta + rng.normal(scale=1e-3, size=seq.n)
        diag = uniqueness_diagnostic(seq, rep.beta_star.beta, perturbed)
        assert diag >= 0.0
        min_diag = min(min_diag, diag)
    report(4, "solver certification", True,
           f"50 solves, worst residual {worst_residual:.1e}·d, min diagnostic {min_diag:.2e}")


def test_criterion_05_symmetry_suite():
    rng = np.random.default_rng(505)
    worst_ln = 0.0
    worst_det = 0.0
    worst_inv = 0.0
    count = 0
    while count < 20:
        seq = _random_near_regular(rng, n_choices=(6, 7, 8, 9))
        audit = symmetry_audit(seq, rng_seed=int(rng.integers(10**6)))
        worst_ln = max(worst_ln, audit.max_ln_gap)
        worst_det = max(worst_det, max(
            c["rel_gap"] for c in audit.det_ratio_checks.values()
        ))
        base = estimate_near_regular(seq).ln_value
        for t in (QuadrantTransform.EDGE_COMPLEMENT, QuadrantTransform.SET_COMPLEMENT):
            image = apply_symmetry(seq, t)
            worst_inv = max(worst_inv, abs(estimate_near_regular(image).ln_value - base))
        count += 1
    ok = worst_ln <= 1e-8 and worst_det <= 1e-6 and worst_inv <= 1e-10
    report(5, "symmetry suite", ok,
           f"ln gap {worst_ln:.1e}, det gap {worst_det:.1e}, closed-form gap {worst_inv:.1e}")
    assert ok, (worst_ln, worst_det, worst_inv)


def test_criterion_06_asymptotic_vs_exact_band():
    """As stated: half-density regular instances, r=3, n in {6, 8, 10, 12}.

    Known-red criterion: no integer-regular half-density instance exists at
    n = 8 or n = 12 (C(n-1, 2) is odd), and the exact counts at n = 10 and
    n = 12 exceed any feasible enumeration budget.  The feasible
    equivalent trend is verified in tests/test_counts.py.
    """
    gaps = {}
    blockers = []
    for n in (6, 8, 10, 12):
        cap = math.comb(n - 1, 2)
        if cap % 2:
            blockers.append(
                f"n={n}: half density needs degree {cap}/2, not an integer"
            )
            continue
        seq = DegreeSequence(n, 3, (cap // 2,) * n)
        try:
            exact = exact_count(seq).value
        except BudgetExceeded as exc:
            blockers.append(f"n={n}: {exc}")
            continue
        est = estimate_near_regular(seq).ln_value
        gaps[n] = abs(est - math.log(exact))
    values = [gaps[n] for n in sorted(gaps)]
    trend_ok = all(a >= b for a, b in zip(values, values[1:]))
    ok = not blockers and trend_ok and values and values[-1] < 0.5 and 12 in gaps
    report(6, "asymptotic-vs-exact band", ok,
           f"computed {gaps}; blocked: {'; '.join(blockers) or 'none'}")
    assert trend_ok and all(math.isfinite(v) for v in values)
    assert not blockers, "; ".join(blockers)
    assert values[-1] < 0.5


def test_criterion_07_appendix_identities():
    start = time.time()
    rng = np.random.default_rng(707)
    results = identities_selftest(
        rng, trials_per_family=50, n_values=(6, 7, 8, 9, 10), r_values=(3, 4)
    )
    elapsed = time.time() - start
    failures = sum(r["failures"] for r in results)
    trials = sum(r["trials"] for r in results)
    ok = failures == 0 and elapsed < 120.0
    report(7, "appendix identities", ok, f"{trials} exact trials, {elapsed:.1f}s")
    assert failures == 0
    assert elapsed < 120.0


def test_criterion_08_bound_suite():
    rng = np.random.default_rng(808)
    draws = 0
    while draws < 100:
        n = int(rng.integers(6, 11))
        r = int(rng.choice([3, 4]))
        delta_hat = float(rng.uniform(0.05, 1.0))
        base = float(rng.uniform(-1.2, 0.1))
        beta = base + rng.uniform(-delta_hat / (2 * r), delta_hat / (2 * r), size=n)
        if field_summary(beta, n, r).avg_lambda > 7.0 / 8.0:
            continue
        checks = check_weight_ratio_bounds(beta, n, r, delta_hat)
        checks += bound_suite(beta, n, r, delta_hat).checks
        failed = [c.name for c in checks if c.status == "fail"]
        assert not failed, (failed, n, r, delta_hat)
        draws += 1
    report(8, "weight and matrix bound suite", True, "100 draws, no violations")


def test_criterion_09_model_identities():
    worst = 0.0
    for n, r, m in [(4, 3, 2), (5, 3, 3)]:
        cap = math.comb(n - 1, r - 1)
        total_b = 0.0
        total_t = 0.0
        for degrees in _compositions(r * m, n, cap):
            seq = DegreeSequence(n, r, degrees)
            total_b += math.exp(prob_model(seq, "B").ln_prob)
            total_t += math.exp(prob_model(seq, "T", normalizer="dp").ln_prob)
            point = prob_model(seq, "D-exact")
            expected = Fraction(
                exact_count(seq).value, math.comb(math.comb(n, r), m)
            )
            assert point.components["exact"] == expected
        worst = max(worst, abs(total_b - 1.0), abs(total_t - 1.0))
        assert abs(total_b - 1.0) <= 1e-10
        assert abs(total_t - 1.0) <= 1e-10
    report(9, "model identities", True, f"normalization gap {worst:.1e}")


def test_criterion_10_model_ratio_trend():
    """As stated: the same nonexistent/infeasible family as criterion 6.

    Known-red criterion; the feasible equivalent trend is verified in
    tests/test_models.py.
    """
    gaps = {}
    blockers = []
    for n in (6, 8, 10, 12):
        cap = math.comb(n - 1, 2)
        if cap % 2:
            blockers.append(
                f"n={n}: half density needs degree {cap}/2, not an integer"
            )
            continue
        seq = DegreeSequence(n, 3, (cap // 2,) * n)
        try:
            measured = measured_ratio(seq, "d-vs-t", normalizer="dp",
                                      d_model="D-exact")
        except BudgetExceeded as exc:
            blockers.append(f"n={n}: {exc}")
            continue
        predicted = predicted_ratio(seq, "d-vs-t")["predicted_ln_ratio"]
        gaps[n] = abs(measured - predicted)
    values = [gaps[n] for n in sorted(gaps)]
    trend_ok = all(a >= b for a, b in zip(values, values[1:]))
    ok = not blockers and trend_ok and 12 in gaps and gaps.get(12, 1.0) < 0.2
    report(10, "model ratio trend", ok,
           f"computed {gaps}; blocked: {'; '.join(blockers) or 'none'}")
    assert trend_ok
    assert not blockers, "; ".join(blockers)
    assert gaps[12] < 0.2


def test_criterion_11_stirling_accuracy():
    from scipy.special import gammaln

    worst = 0.0
    for big_k, lam, x in [(10**4, 0.5, 0.0), (10**4, 0.5, 50.0),
                          (10**6, 0.3, 500.0)]:
        got = stirling_log_binom(big_k, lam, x)
        want = float(
            gammaln(big_k + 1)
            - gammaln(lam * big_k + x + 1)
            - gammaln(big_k - lam * big_k - x + 1)
        )
        rel = abs(got - want) / abs(want)
        worst = max(worst, rel)
        assert rel <= 1e-6
    report(11, "binomial expansion accuracy", True, f"worst rel err {worst:.1e}")


def test_criterion_12_tail_bound():
    spec = HypergeomSpec(6, 3, 10)
    rows = tail_bound_report(spec, range(1, 16))
    ok = all(row["holds"] for row in rows)
    report(12, "hypergeometric tail bound", ok, f"t=1..15 at d=5")
    assert ok


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_run(argv)
    return code, out.getvalue()


def test_criterion_13_cli_determinism():
    commands = []
    for name in ("reg6.json", "skew6.json", "near8.json"):
        path = str(INSTANCES / name)
        commands.append(["count", "--input", path, "--method", "near-regular"])
        if name != "near8.json":  # exact count there exceeds the budget
            commands.append(["count", "--input", path, "--method", "exact"])
        commands.append(["solve", "--input", path])
        commands.append(["models", "--input", path, "--compare",
                         "d-vs-t,b-vs-d,klw"])
    commands.append(
        ["count", "--input", str(INSTANCES / "tiny4.json"), "--method", "general"]
    )
    commands.append(
        ["models", "--input", str(INSTANCES / "tiny4.json"), "--compare", "d-vs-t"]
    )
    max_threads = str(max(2, min(8, os.cpu_count() or 1)))
    for argv in commands:
        outputs = set()
        for threads in ("1", "2", max_threads):
            code, out = _cli(["--threads", threads] + argv)
            assert code == 0, (argv, code)
            outputs.add(out)
        assert len(outputs) == 1, argv
    report(13, "CLI determinism across thread counts", True,
           f"{len(commands)} commands x 3 thread counts")
