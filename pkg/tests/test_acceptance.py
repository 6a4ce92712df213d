"""Release acceptance suite.

Each test prints one ``[PASS]``/``[FAIL]`` line per criterion (run pytest
with ``-s`` to see them live).  The statistical criteria run the full
experiment protocols at their published sizes, so this module takes on the
order of fifteen minutes on one core; everything is seeded and
deterministic.
"""

import math
import time

import numpy as np
import pytest

from slapprox import (
    BetaParams,
    BinomialOpinion,
    DensityEvaluator,
    GaussianParams,
    RngSeed,
    beta_density,
    beta_moments,
    beta_to_opinion,
    estimate_moments,
    fit_logit_kde,
    fuse,
    gaussian_density,
    integral_distance,
    kde_bias_bound,
    kde_density,
    limit_case_density,
    multiply,
    opinion_to_beta,
    product_moments_analytic,
    project_probability,
    push_product_samples,
    sample_beta,
    validate_opinion,
)
from slapprox.experiments import (
    ExperimentConfig,
    run_limit_case,
    run_multi_product,
    run_quantitative,
)
from slapprox.experiments.cli import main as cli_main
from slapprox.experiments.io import aggregates_path

pytestmark = [pytest.mark.acceptance, pytest.mark.slow]

SEED = 7
W = 2.0
EPS = 1e-9


def _check(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _means(aggregates) -> dict:
    out = {}
    for a in aggregates:
        out[(a.n_samples, a.l_factors, a.approximant)] = a
    return out


# --- shared heavy runs -------------------------------------------------------


@pytest.fixture(scope="module")
def quant_product_opinion():
    cfg = ExperimentConfig(operator="product", start="opinion", n_ladder=(10_000,),
                           n_reps=100, m_integration=1000, seed=RngSeed(SEED))
    return run_quantitative(cfg)


@pytest.fixture(scope="module")
def quant_product_pdf():
    cfg = ExperimentConfig(operator="product", start="pdf", n_ladder=(10_000,),
                           n_reps=100, m_integration=1000, seed=RngSeed(SEED))
    return run_quantitative(cfg)


@pytest.fixture(scope="module")
def quant_fusion():
    cfg = ExperimentConfig(operator="fusion", start="opinion", n_ladder=(10_000,),
                           n_reps=100, m_integration=1000, seed=RngSeed(SEED))
    return run_quantitative(cfg)


@pytest.fixture(scope="module")
def multi_run():
    cfg = ExperimentConfig(operator="product", start="opinion", n_samples=10_000,
                           n_reps=100, m_integration=1000, l_factors=(2, 5),
                           seed=RngSeed(SEED))
    return run_multi_product(cfg)


@pytest.fixture(scope="module")
def limit_run():
    cfg = ExperimentConfig(operator="product", start="opinion", n_samples=1_000_000,
                           n_reps=100, m_integration=1000, seed=RngSeed(SEED))
    return run_limit_case(cfg)


def _random_opinions(rng, count, same_prior=False):
    masses = rng.dirichlet((1.0, 1.0, 1.0), size=(count, 2))
    priors = rng.uniform(size=(count, 2))
    if same_prior:
        priors[:, 1] = priors[:, 0]
    return [
        (BinomialOpinion(*masses[i, 0], priors[i, 0]), BinomialOpinion(*masses[i, 1], priors[i, 1]))
        for i in range(count)
    ]


# --- algebraic operator suite --------------------------------------------------


def test_multiply_bulk_validity_and_multiplicativity():
    rng = RngSeed(SEED).generator(100)
    pairs = _random_opinions(rng, 10_000)
    start = time.perf_counter()
    worst = 0.0
    for x, y in pairs:
        z = multiply(x, y)
        assert validate_opinion(z), validate_opinion(z).reason
        worst = max(worst, abs(project_probability(z) - project_probability(x) * project_probability(y)))
    elapsed = time.perf_counter() - start
    _check(
        "algebra/multiply 10^4 pairs",
        worst <= 1e-12 and elapsed < 1.0,
        f"max |dP| = {worst:.2e}, runtime {elapsed:.2f}s",
    )


def _fusion_mean_strength(x, y):
    a = x.a
    num = x.b * y.b + y.b * a * x.u + x.b * a * y.u + a * a * x.u * y.u
    m = num / (2 * num + 1 - y.b - a * y.u - x.b - a * x.u)
    px, py = x.b + a * x.u, y.b + a * y.u
    gx, gy = px * (1 - px), py * (1 - py)
    cx, cy = W / x.u + 1, W / y.u + 1
    t3 = (cx * cy * gx * gy) / (m * (1 - m) * (cy * gy + cx * gx)) - 1
    return m, max(W * a / m, W * (1 - a) / (1 - m), t3)


def test_fuse_bulk_validity_and_moment():
    rng = RngSeed(SEED).generator(101)
    pairs = _random_opinions(rng, 10_000, same_prior=True)
    start = time.perf_counter()
    worst_m, worst_u = 0.0, 0.0
    for x, y in pairs:
        z = fuse(x, y)
        assert validate_opinion(z), validate_opinion(z).reason
        m, s = _fusion_mean_strength(x, y)
        worst_m = max(worst_m, abs(project_probability(z) - m))
        worst_u = max(worst_u, abs(z.u - W / s))
    elapsed = time.perf_counter() - start
    _check(
        "algebra/fuse 10^4 pairs",
        worst_m <= 1e-12 and worst_u <= 1e-12 and elapsed < 1.0,
        f"max |dP| = {worst_m:.2e}, max |u - W/s| = {worst_u:.2e}, runtime {elapsed:.2f}s",
    )


def test_mapping_round_trips_bulk():
    rng = RngSeed(SEED).generator(102)
    worst = 0.0
    count = 0
    while count < 10_000:
        b, d, u = rng.dirichlet((1.0, 1.0, 1.0))
        a = rng.uniform()
        if u < 1e-6:
            continue
        op = BinomialOpinion(b, d, u, a)
        back = beta_to_opinion(opinion_to_beta(op), a)
        worst = max(
            worst, abs(back.b - op.b), abs(back.d - op.d), abs(back.u - op.u)
        )
        count += 1
    count = 0
    while count < 10_000:
        alpha, beta = 10.0 - rng.uniform(0, 10, size=2)
        lo, hi = max(0.0, 1.0 - beta / W), min(1.0, alpha / W)
        if lo > hi:
            continue
        a = rng.uniform(lo, hi)
        p = BetaParams(alpha, beta)
        back = opinion_to_beta(beta_to_opinion(p, a))
        worst = max(worst, abs(back.alpha - alpha), abs(back.beta - beta))
        count += 1
    _check("algebra/round trips 10^4 each way", worst <= 1e-9, f"max deviation {worst:.2e}")


# --- statistical oracle suite -----------------------------------------------------


def test_product_moments_against_mc():
    rng = RngSeed(SEED).generator(103)
    n = 100_000
    worst_ratio = 0.0
    for _ in range(50):
        px = BetaParams(*(10.0 - rng.uniform(0, 10, size=2)))
        py = BetaParams(*(10.0 - rng.uniform(0, 10, size=2)))
        batch = push_product_samples(sample_beta(px, n, rng), sample_beta(py, n, rng))
        got = estimate_moments(batch)
        want = product_moments_analytic(beta_moments(px), beta_moments(py))
        se_mu = batch.values.std(ddof=1) / math.sqrt(n)
        centered = batch.values - batch.values.mean()
        se_var = math.sqrt((np.mean(centered**4) - got.sigma2**2) / n)
        worst_ratio = max(
            worst_ratio, abs(got.mu - want.mu) / (4 * se_mu), abs(got.sigma2 - want.sigma2) / (4 * se_var)
        )
    _check(
        "oracle/product moments 50 pairs at N=10^5",
        worst_ratio <= 1.0,
        f"worst |error| / (4 se) = {worst_ratio:.3f}",
    )


def test_kde_on_uniform_normalization_and_level():
    batch = sample_beta(BetaParams(1, 1), 1_000_000, RngSeed(SEED, 104))
    model = fit_logit_kde(batch)
    grid = np.linspace(EPS, 1 - EPS, 10_000)
    mass = float(np.trapezoid(kde_density(model, grid), grid))
    mid = kde_density(model, 0.5)
    _check(
        "oracle/KDE on uniform at N=10^6",
        abs(mass - 1.0) <= 0.02 and abs(mid - 1.0) <= 0.05,
        f"mass = {mass:.4f}, density(0.5) = {mid:.4f}",
    )


def test_distance_matches_quadrature():
    pairs = [
        (
            DensityEvaluator(lambda z: beta_density(BetaParams(2, 2), z), "beta22"),
            DensityEvaluator(lambda z: beta_density(BetaParams(1, 1), z), "uniform"),
        ),
        (
            DensityEvaluator(lambda z: gaussian_density(GaussianParams(0.5, 0.01), z), "gauss"),
            DensityEvaluator(lambda z: beta_density(BetaParams(2, 2), z), "beta22"),
        ),
        (
            DensityEvaluator(lambda z: beta_density(BetaParams(1, 1), z), "uniform"),
            DensityEvaluator(limit_case_density, "exact-product"),
        ),
    ]
    grid = np.linspace(EPS, 1 - EPS, 100_000)
    worst = 0.0
    for i, (p, q) in enumerate(pairs):
        oracle = float(np.trapezoid(np.abs(p.pdf(grid) - q.pdf(grid)), grid))
        r = integral_distance(p, q, 100_000, RngSeed(SEED, 105 + i))
        worst = max(worst, abs(r.value - oracle) / (4 * r.stderr))
    _check(
        "oracle/integral distance vs trapezoid quadrature",
        worst <= 1.0,
        f"worst |error| / (4 stderr) = {worst:.3f}",
    )


# --- limit-case reproduction --------------------------------------------------------


def test_limit_case_bands(limit_run):
    _, aggregates, _ = limit_run
    mean = {a.approximant: a.mean for a in aggregates}
    _check("limit/KDE vs exact", mean["kde"] <= 0.05, f"mean = {mean['kde']:.5f} (<= 0.05)")
    _check(
        "limit/operator image vs exact",
        0.1 <= mean["sl"] <= 0.42,
        f"mean = {mean['sl']:.5f} (in [0.1, 0.42])",
    )
    _check(
        "limit/analytic Beta vs exact",
        0.018 <= mean["beta_an"] <= 0.073,
        f"mean = {mean['beta_an']:.5f} (in [0.018, 0.073])",
    )


# --- quantitative bands ----------------------------------------------------------------


def test_product_quantitative_bands(quant_product_opinion, quant_product_pdf):
    stats = _means(quant_product_opinion[1])
    gauss_mc = stats[(10_000, None, "gauss_mc")].mean
    gauss_an = stats[(10_000, None, "gauss_an")].mean
    beta_mc = stats[(10_000, None, "beta_mc")].mean
    beta_an = stats[(10_000, None, "beta_an")].mean
    sl = stats[(10_000, None, "sl")]
    _check(
        "quantitative/product Gaussian band",
        0.25 <= gauss_mc <= 0.45 and 0.25 <= gauss_an <= 0.45,
        f"gauss_mc = {gauss_mc:.4f}, gauss_an = {gauss_an:.4f} (in [0.25, 0.45])",
    )
    _check(
        "quantitative/product Beta band",
        0.05 <= beta_mc <= 0.18 and 0.05 <= beta_an <= 0.18,
        f"beta_mc = {beta_mc:.4f}, beta_an = {beta_an:.4f} (in [0.05, 0.18])",
    )
    _check(
        "quantitative/product operator band",
        0.10 <= sl.mean <= 0.32,
        f"sl = {sl.mean:.4f} (in [0.10, 0.32])",
    )
    sl_pdf = _means(quant_product_pdf[1])[(10_000, None, "sl")]
    gap = abs(sl.mean - sl_pdf.mean)
    _check(
        "quantitative/opinion-start vs pdf-start consistency",
        gap < sl.std + sl_pdf.std,
        f"|{sl.mean:.4f} - {sl_pdf.mean:.4f}| = {gap:.4f} < {sl.std + sl_pdf.std:.4f}",
    )


def test_fusion_quantitative_bands(quant_fusion):
    stats = _means(quant_fusion[1])
    gauss = stats[(10_000, None, "gauss_mc")].mean
    beta = stats[(10_000, None, "beta_mc")]
    sl = stats[(10_000, None, "sl")].mean
    _check("quantitative/fusion Gaussian reaches 0.3", gauss >= 0.3, f"gauss_mc = {gauss:.4f}")
    _check(
        "quantitative/fusion Beta band",
        0.07 <= beta.mean <= 0.20,
        f"beta_mc = {beta.mean:.4f} (in [0.07, 0.20])",
    )
    _check(
        "quantitative/fusion operator within Beta spread",
        abs(sl - beta.mean) <= beta.std,
        f"|{sl:.4f} - {beta.mean:.4f}| = {abs(sl - beta.mean):.4f} <= {beta.std:.4f}",
    )


# --- multi-product trend ------------------------------------------------------------------


def test_multi_product_trend(multi_run):
    stats = _means(multi_run[1])
    low = stats[(10_000, 2, "sl")]
    high = stats[(10_000, 5, "sl")]
    pooled = math.sqrt((low.std**2 + high.std**2) / 2)
    _check(
        "multi-product/monotone up to noise",
        high.mean >= low.mean - pooled,
        f"mean(L=5) = {high.mean:.4f} >= mean(L=2) - pooled std = {low.mean - pooled:.4f}",
    )


def test_multi_product_two_factors_consistent_with_quantitative(multi_run, quant_product_opinion):
    two = _means(multi_run[1])[(10_000, 2, "sl")]
    quant = _means(quant_product_opinion[1])[(10_000, None, "sl")]
    gap = abs(two.mean - quant.mean)
    _check(
        "multi-product/L=2 matches the quantitative pipeline",
        gap < two.std + quant.std,
        f"|{two.mean:.4f} - {quant.mean:.4f}| = {gap:.4f} < {two.std + quant.std:.4f}",
    )


# --- bias gate ------------------------------------------------------------------------------


def test_bias_gate_on_quantitative_runs(quant_product_opinion, quant_product_pdf, quant_fusion):
    violations = []
    for name, (_, aggregates, _) in (
        ("product/opinion", quant_product_opinion),
        ("product/pdf", quant_product_pdf),
        ("fusion/opinion", quant_fusion),
    ):
        smallest = min(a.mean for a in aggregates)
        bound = kde_bias_bound(10_000)
        if bound > 0.01 * smallest or not all(a.bias_gate_ok for a in aggregates):
            violations.append(f"{name}: bound {bound:.2e} vs smallest mean {smallest:.4f}")
    _check(
        "bias gate at N=10^4",
        not violations,
        "; ".join(violations) or f"bound {kde_bias_bound(10_000):.2e} two orders below every mean",
    )


# --- determinism ------------------------------------------------------------------------------


def test_every_subcommand_is_byte_deterministic(tmp_path):
    cases = [
        ("qualitative", ["--operands", "0.61,0.30,0.09,0.79;0.28,0.66,0.06,0.46",
                         "--samples", "2000", "--grid", "64"]),
        ("quantitative", ["--samples", "500,1000", "--reps", "3", "--grid", "100"]),
        ("limit-case", ["--samples", "2000", "--reps", "3", "--grid", "100"]),
        ("multi-product", ["--samples", "1000", "--reps", "3", "--grid", "100",
                           "--factors", "2..3"]),
    ]
    mismatches = []
    for command, extra in cases:
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{command}-{tag}.csv"
            rc = cli_main([command, *extra, "--seed", str(SEED), "--out", str(out)])
            assert rc == 0
            blob = out.read_bytes()
            if command != "qualitative":
                blob += aggregates_path(out).read_bytes()
            outs.append(blob)
        if outs[0] != outs[1]:
            mismatches.append(command)
    _check(
        "determinism/byte-identical CSV per subcommand",
        not mismatches,
        "all four subcommands reproduce" if not mismatches else f"mismatch: {mismatches}",
    )
