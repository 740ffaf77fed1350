"""Degree-sequence probability models and their predicted log-ratios.

Three laws on degree vectors are compared:

* the degree sequence of a uniformly random hypergraph with m edges
  (exact probability = exact count / C(C(n, r), m));
* independent binomials Bin(C(n-1, r-1), p) conditioned on sum n*d,
  which is p-free and has the closed product-of-binomials form;
* independent per-vertex hypergeometrics conditioned on sum n*d, whose
  normalizer has no closed form and is computed by exact convolution
  (or a central-limit approximation beyond budget).

Everything is carried in natural-log domain: the binomial normalizers
overflow binary64 immediately at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import gammaln, logsumexp

from .budgets import check_dp_budget
from .core import DegreeSequence, derive
from .errors import BudgetExceeded, DensityDegenerate, ExpansionDomainError
from .subsets import colex_unrank

LOG_ZERO = -math.inf


def log_comb(a: float, b: float) -> float:
    """log C(a, b) via log-gamma; -inf outside the support."""
    if b < 0 or b > a:
        return LOG_ZERO
    return float(gammaln(a + 1.0) - gammaln(b + 1.0) - gammaln(a - b + 1.0))


@dataclass(frozen=True)
class HypergeomSpec:
    """Per-vertex degree law of a uniform random m-edge hypergraph.

    Sampling m edges out of C(n, r), of which C(n-1, r-1) contain a fixed
    vertex; the vertex degree counts the marked edges drawn.
    """

    n: int
    r: int
    m: int

    @property
    def population(self) -> int:
        return math.comb(self.n, self.r)

    @property
    def marked(self) -> int:
        return math.comb(self.n - 1, self.r - 1)

    @property
    def mean(self) -> float:
        return self.m * self.marked / self.population

    @property
    def variance(self) -> float:
        """(1-lam)(n-r)d^2 / (nd - lam r); equals the classical form."""
        n, r = self.n, self.r
        d = self.mean
        lam = d / self.marked
        if self.m == 0 or self.m == self.population:
            return 0.0
        return (1.0 - lam) * (n - r) * d * d / (n * d - lam * r)

    def support(self) -> range:
        lo = max(0, self.m - (self.population - self.marked))
        hi = min(self.marked, self.m)
        return range(lo, hi + 1)


def hypergeom_log_pmf(spec: HypergeomSpec, k: int) -> float:
    num = (
        log_comb(spec.marked, k)
        + log_comb(spec.population - spec.marked, spec.m - k)
    )
    return num - log_comb(spec.population, spec.m)


def hypergeom_pmf(spec: HypergeomSpec, k: int) -> float:
    lp = hypergeom_log_pmf(spec, k)
    return 0.0 if lp == LOG_ZERO else math.exp(lp)


def _log_pmf_vector(spec: HypergeomSpec) -> np.ndarray:
    ks = np.arange(spec.marked + 1)
    out = np.full(spec.marked + 1, LOG_ZERO)
    for k in spec.support():
        out[k] = hypergeom_log_pmf(spec, k)
    return out


def _log_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Log-domain convolution of two log-pmf vectors."""
    out = np.full(a.size + b.size - 1, LOG_ZERO)
    for shift in range(out.size):
        lo = max(0, shift - b.size + 1)
        hi = min(a.size - 1, shift)
        idx = np.arange(lo, hi + 1)
        terms = a[idx] + b[shift - idx]
        finite = terms > LOG_ZERO
        if finite.any():
            out[shift] = float(logsumexp(terms[finite]))
    return out


def conditioned_sum_log_prob(
    spec: HypergeomSpec,
    n: int,
    target: int | None = None,
    method: str = "dp",
    budget: int | None = None,
) -> float:
    """log Prob(sum of n iid per-vertex degrees equals target).

    ``dp`` convolves the exact pmf n times in log domain; ``clt`` uses the
    local-limit approximation ``(sigma sqrt(2 pi n))^{-1}
    exp(-y^2 / (2 n sigma^2))`` with y the offset from the mean sum.
    """
    if target is None:
        target = spec.m * spec.r
    if method == "clt":
        sigma2 = spec.variance
        if sigma2 <= 0:
            raise DensityDegenerate("degenerate hypergeometric variance")
        y = target - n * spec.mean
        return (
            -0.5 * math.log(2.0 * math.pi * n * sigma2)
            - y * y / (2.0 * n * sigma2)
        )
    if method != "dp":
        raise ValueError(f"unknown normalizer method {method!r}")
    check_dp_budget(n * (spec.marked + 1) ** 2, budget)
    pmf = _log_pmf_vector(spec)
    acc = pmf.copy()
    for _ in range(n - 1):
        acc = _log_convolve(acc, pmf)
    if not 0 <= target < acc.size:
        return LOG_ZERO
    return float(acc[target])


@dataclass
class ModelPoint:
    model: str  # "D-exact" | "D-asymptotic" | "B" | "T"
    ln_prob: float
    components: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "model": self.model,
            "ln_prob": self.ln_prob,
            "components": self.components,
        }


def prob_model(
    seq: DegreeSequence,
    model: str,
    normalizer: str = "dp",
    estimate_method: str = "near-regular",
    budget: int | None = None,
    threads: int | None = None,
) -> ModelPoint:
    """Log-probability of one degree vector under one model."""
    n, r = seq.n, seq.r
    m = seq.edge_count
    marked = math.comb(n - 1, r - 1)
    population = math.comb(n, r)
    nd = r * m

    if model == "B":
        ln = sum(log_comb(marked, dj) for dj in seq.degrees)
        ln -= log_comb(n * marked, nd)
        return ModelPoint(model="B", ln_prob=ln, components={})

    if model == "T":
        spec = HypergeomSpec(n, r, m)
        method = normalizer
        if method == "dp":
            try:
                ln_p = conditioned_sum_log_prob(spec, n, nd, "dp", budget=budget)
            except BudgetExceeded:
                # exact convolution where affordable, local limit beyond
                method = "clt"
                ln_p = conditioned_sum_log_prob(spec, n, nd, "clt")
        else:
            ln_p = conditioned_sum_log_prob(spec, n, nd, method, budget=budget)
        ln = -n * log_comb(population, m) - ln_p
        for dj in seq.degrees:
            ln += log_comb(marked, dj) + log_comb(population - marked, m - dj)
        return ModelPoint(
            model="T", ln_prob=ln,
            components={"ln_normalizer": ln_p, "normalizer_method": method},
        )

    if model == "D-exact":
        from .oracle import exact_count

        count = exact_count(seq, budget=budget).value
        total = math.comb(population, m)
        ln = (math.log(count) if count else LOG_ZERO) - math.log(total)
        return ModelPoint(
            model="D-exact", ln_prob=ln,
            components={
                "count": count,
                "total": total,
                "exact": Fraction(count, total),
            },
        )

    if model == "D-asymptotic":
        from . import counts

        if estimate_method == "general":
            est = counts.estimate_general(seq, budget=budget, threads=threads)
        elif estimate_method == "corollary":
            est = counts.estimate_corollary(seq)
        else:
            est = counts.estimate_near_regular(seq)
        ln = est.ln_value - log_comb(population, m)
        return ModelPoint(
            model="D-asymptotic", ln_prob=ln,
            components={"estimate_method": est.method, "ln_count": est.ln_value},
        )

    raise ValueError(f"unknown model {model!r}")


RATIO_PAIRS = ("b-vs-d", "d-vs-t", "klw")


def predicted_ratio(
    seq: DegreeSequence, pair: str, klw_phi: float = 0.47
) -> dict:
    """Predicted ln(Prob_D / Prob_other) without the error term.

    Returns the prediction together with its error indicator (implicit
    constant 1; an indicator, not a bound).
    """
    params = derive(seq)
    n, r = params.n, params.r
    lam, d, q = params.lam, params.d, params.q
    if not (0.0 < lam < 1.0):
        raise DensityDegenerate("ratio formulas need density strictly inside (0,1)")
    r2 = params.r2
    from .counts import error_indicators

    eps = sum(error_indicators(params).values())
    if pair == "b-vs-d":
        value = (n - 1) / 2.0 * math.log((n - 1) / (n - r)) - (r - 1) * r2 / (
            2.0 * (1.0 - lam) * (n - r) * d
        )
        indicator = eps + params.delta_max * d ** (-0.6)
        extras = {}
    elif pair == "d-vs-t":
        value = (n - 1) / 2.0 * math.log((n - 1) / n) + r2 / (2.0 * q)
        indicator = eps + params.delta_max * n**0.6 * q ** (-0.6)
        extras = {}
    elif pair == "klw":
        value = (r - 1) / 2.0 - (r - 1) * r2 / (2.0 * (1.0 - lam) * (n - r) * d)
        phi = klw_phi
        log_n = math.log(n)
        if r == 3:
            indicator = (
                log_n**2 / math.sqrt(n)
                + d ** (2.0 - 4.0 * phi) / n
                + d ** (1.0 - 3.0 * phi)
            )
        else:
            indicator = (
                r**2 * log_n**2 / math.sqrt(n)
                + (lam * n + r) * r**2 * d ** (1.0 - 3.0 * phi)
            )
        extras = {
            "phi": phi,
            "hypothesis_r_small": r**3 * d ** (1.0 - 3.0 * phi) < 1.0,
            "hypothesis_degree_spread": params.delta_max <= d ** (1.0 - phi),
        }
    else:
        raise ValueError(f"unknown ratio pair {pair!r}")
    return {"pair": pair, "predicted_ln_ratio": value, "error_indicator": indicator, **extras}


def measured_ratio(
    seq: DegreeSequence,
    pair: str,
    normalizer: str = "dp",
    d_model: str = "D-exact",
    budget: int | None = None,
    threads: int | None = None,
) -> float:
    """Measured ln(Prob_D / Prob_other) from the model probabilities."""
    other = "B" if pair in ("b-vs-d", "klw") else "T"
    pd = prob_model(seq, d_model, budget=budget, threads=threads)
    po = prob_model(seq, other, normalizer=normalizer, budget=budget)
    return pd.ln_prob - po.ln_prob


def stirling_log_binom(big_k: float, lam: float, x: float) -> float:
    """Stirling-series log-binomial ``log C(K, lam K + x)``.

    All displayed correction terms of the expansion are included, through
    the x^4 / K^3 term; no error term is added.
    """
    klam = lam * (1.0 - lam) * big_k
    if klam <= 0:
        raise ExpansionDomainError("need lam(1-lam)K > 0")
    one = 1.0 - lam
    main = (
        -(lam * big_k + x + 0.5) * math.log(lam)
        - (one * big_k - x + 0.5) * math.log(one)
        - 0.5 * math.log(2.0 * math.pi * big_k)
    )
    c1 = -x * x / (2.0 * klam)
    c2 = -(1.0 - 2.0 * lam) * x / (2.0 * klam)
    c3 = -(1.0 - lam + lam * lam) / (12.0 * klam)
    k2 = lam * lam * one * one * big_k * big_k
    c4 = (1.0 - 2.0 * lam) * x**3 / (6.0 * k2)
    c5 = (1.0 - 2.0 * lam + 2.0 * lam * lam) * x * x / (4.0 * k2)
    c6 = (1.0 - 2.0 * lam) * x / (12.0 * k2)
    k3 = lam**3 * one**3 * big_k**3
    c7 = -(1.0 - 3.0 * lam + 3.0 * lam * lam) * x**4 / (12.0 * k3)
    return main + c1 + c2 + c3 + c4 + c5 + c6 + c7


def sample_degrees(
    n: int, r: int, m: int, rng_seed, rng: np.random.Generator | None = None
) -> tuple[int, ...]:
    """Degrees of a uniform random simple m-edge hypergraph.

    Uniform m-subset of the colex-indexed r-subsets via a partial
    Fisher-Yates pass over the implicit index space; rejection-free and
    deterministic given the seed.
    """
    population = math.comb(n, r)
    if not 0 <= m <= population:
        raise ValueError(f"need 0 <= m <= C(n, r) = {population}")
    if rng is None:
        rng = np.random.default_rng(rng_seed)
    replacement: dict[int, int] = {}
    degrees = [0] * n
    for i in range(m):
        j = int(rng.integers(i, population))
        vi = replacement.get(i, i)
        vj = replacement.get(j, j)
        replacement[j] = vi
        replacement[i] = vj
        for v in colex_unrank(vj, n, r):
            degrees[v] += 1
    return tuple(degrees)


def sample_degree_batch(
    n: int, r: int, m: int, rng_seed, count: int, batch: int = 1024
) -> np.ndarray:
    """Batched sampling with fixed stream-splitting.

    Sample i is drawn from the stream spawned for batch i // batch, so the
    output is independent of any parallel scheduling of the batches.
    """
    seeds = np.random.SeedSequence(rng_seed).spawn((count + batch - 1) // batch)
    out = np.empty((count, n), dtype=np.int64)
    for b, seed in enumerate(seeds):
        rng = np.random.default_rng(seed)
        for i in range(b * batch, min((b + 1) * batch, count)):
            out[i] = sample_degrees(n, r, m, None, rng=rng)
    return out


def tail_bound_report(spec: HypergeomSpec, t_values) -> list[dict]:
    """Exact two-sided tails against 2 exp(-t^2 / (2(d + t/3)))."""
    d = spec.mean
    pmf = np.array([hypergeom_pmf(spec, k) for k in range(spec.marked + 1)])
    ks = np.arange(spec.marked + 1)
    out = []
    for t in t_values:
        tail = float(pmf[np.abs(ks - d) >= t].sum())
        bound = 2.0 * math.exp(-t * t / (2.0 * (d + t / 3.0)))
        out.append({"t": float(t), "tail": tail, "bound": bound, "holds": tail <= bound})
    return out


def conditioning_factor_report(
    spec: HypergeomSpec, n: int, y_values, budget: int | None = None
) -> list[dict]:
    """Measured conditioning factor C(y) against its Gaussian approximation.

    C(y) = Prob(sum of n-1 copies = nd - y) / Prob(sum of n copies = nd),
    computed by exact convolution, compared with
    exp(-(y - d)^2 / (2 (n-1) sigma^2)).
    """
    nd = spec.m * spec.r
    d = spec.mean
    sigma2 = spec.variance
    check_dp_budget(n * (spec.marked + 1) ** 2, budget)
    pmf = _log_pmf_vector(spec)
    acc = pmf.copy()
    for _ in range(n - 2):
        acc = _log_convolve(acc, pmf)
    ln_partial = acc  # sum of n-1 copies
    full = _log_convolve(acc, pmf)
    ln_p = float(full[nd])
    out = []
    for y in y_values:
        y = int(y)
        idx = nd - y
        ln_num = (
            float(ln_partial[idx]) if 0 <= idx < ln_partial.size else LOG_ZERO
        )
        measured = math.exp(ln_num - ln_p) if ln_num > LOG_ZERO else 0.0
        gaussian = math.exp(-((y - d) ** 2) / (2.0 * (n - 1) * sigma2))
        out.append(
            {"y": y, "measured": measured, "gaussian": gaussian,
             "abs_gap": abs(measured - gaussian)}
        )
    return out
