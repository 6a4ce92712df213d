import math

import numpy as np
import pytest

from slapprox import (
    BetaParams,
    RngSeed,
    SampleBatch,
    estimate_moments,
    mc_estimate,
    product_moments_analytic,
    push_fusion_samples,
    push_product_samples,
    sample_beta,
    sample_random_beta_params,
    sample_random_opinion,
    validate_opinion,
)
from slapprox.densities import beta_moments
from slapprox.errors import DegenerateVarianceError


# --- seeds ------------------------------------------------------------------


def test_rng_seed_validation():
    with pytest.raises(ValueError):
        RngSeed(-1)
    with pytest.raises(ValueError):
        RngSeed(0, stream=-2)


def test_identical_seed_reproduces_bitwise():
    a = sample_beta(BetaParams(2.5, 1.5), 1000, RngSeed(7, 3))
    b = sample_beta(BetaParams(2.5, 1.5), 1000, RngSeed(7, 3))
    assert np.array_equal(a.values, b.values)


def test_streams_are_distinct():
    a = sample_beta(BetaParams(2, 2), 100, RngSeed(7, 0))
    b = sample_beta(BetaParams(2, 2), 100, RngSeed(7, 1))
    assert not np.array_equal(a.values, b.values)


def test_single_draw_repeats(rng):
    one = sample_beta(BetaParams(3, 4), 1, RngSeed(11))
    two = sample_beta(BetaParams(3, 4), 1, RngSeed(11))
    assert one.values[0] == two.values[0]


# --- batches ------------------------------------------------------------------


def test_sample_batch_rejects_out_of_range():
    with pytest.raises(ValueError):
        SampleBatch(np.array([0.5, 1.2]))


def test_sample_batch_is_immutable():
    batch = SampleBatch(np.array([0.1, 0.9]))
    with pytest.raises(ValueError):
        batch.values[0] = 0.3


def test_sample_beta_mean_within_three_sigma():
    n = 10**5
    for params in (BetaParams(1, 1), BetaParams(2, 2)):
        batch = sample_beta(params, n, RngSeed(5))
        m = beta_moments(params)
        assert abs(batch.values.mean() - m.mu) <= 3 * math.sqrt(m.sigma2 / n)


def test_tiny_shapes_never_produce_nan():
    batch = sample_beta(BetaParams(0.002, 0.003), 20000, RngSeed(3))
    assert np.all(np.isfinite(batch.values))
    assert np.all((batch.values >= 0) & (batch.values <= 1))


# --- random operands ------------------------------------------------------------


def test_random_opinion_is_valid():
    for stream in range(50):
        assert validate_opinion(sample_random_opinion(RngSeed(1, stream)))


def test_random_opinion_marginals():
    rng = RngSeed(17).generator()
    ops = [sample_random_opinion(rng) for _ in range(10**5)]
    b_mean = np.mean([o.b for o in ops])
    a_mean = np.mean([o.a for o in ops])
    assert abs(b_mean - 1 / 3) <= 0.005  # Dirichlet(1,1,1) marginal mean with 3-sigma slack
    assert abs(a_mean - 0.5) <= 0.003
    assert np.mean([o.u for o in ops]) == pytest.approx(1 / 3, abs=0.005)


def test_random_beta_params_range_and_mean():
    rng = RngSeed(23).generator()
    draws = [sample_random_beta_params(rng) for _ in range(10**5)]
    alphas = np.array([p.alpha for p in draws])
    assert np.all((alphas > 0) & (alphas <= 10))
    assert abs(alphas.mean() - 5.0) <= 0.03


def test_random_beta_params_reproducible():
    assert sample_random_beta_params(RngSeed(9)) == sample_random_beta_params(RngSeed(9))


# --- pushforwards -----------------------------------------------------------------


def test_product_with_unit_factor_is_identity():
    y = SampleBatch(np.linspace(0.1, 0.9, 9))
    ones = SampleBatch(np.ones(9))
    assert np.array_equal(push_product_samples(ones, y).values, y.values)


def test_product_with_zero_factor_absorbs():
    y = SampleBatch(np.linspace(0.1, 0.9, 9))
    zeros = SampleBatch(np.zeros(9))
    assert np.all(push_product_samples(zeros, y).values == 0.0)


def test_product_length_mismatch():
    with pytest.raises(ValueError, match="length"):
        push_product_samples(SampleBatch(np.ones(3)), SampleBatch(np.ones(4)))


def test_product_of_uniforms_matches_analytic_moments():
    n = 10**6
    rng = RngSeed(31).generator()
    z = push_product_samples(
        sample_beta(BetaParams(1, 1), n, rng), sample_beta(BetaParams(1, 1), n, rng)
    )
    assert abs(z.values.mean() - 0.25) <= 3 * math.sqrt(7 / 144 / n)


def test_fusion_fixed_point():
    half = SampleBatch(np.full(5, 0.5))
    assert np.all(push_fusion_samples(half, half).values == 0.5)


def test_fusion_certainty_absorbs():
    x = SampleBatch(np.ones(4))
    y = SampleBatch(np.full(4, 0.7))
    assert np.all(push_fusion_samples(x, y).values == 1.0)


def test_fusion_direct_value():
    z = push_fusion_samples(SampleBatch(np.array([0.3])), SampleBatch(np.array([0.7])))
    assert z.values[0] == pytest.approx(0.5, abs=1e-15)


def test_fusion_degenerate_pair_redrawn():
    x = SampleBatch(np.array([0.0, 0.5]))
    y = SampleBatch(np.array([1.0, 0.5]))
    calls = []

    def redraw(k):
        calls.append(k)
        return np.full(k, 0.25), np.full(k, 0.5)

    z = push_fusion_samples(x, y, redraw=redraw)
    assert calls == [1]
    assert "redraws=1" in z.provenance
    assert z.values[0] == pytest.approx(0.25 * 0.5 / (0.25 * 0.5 + 0.75 * 0.5))


def test_fusion_degenerate_pair_without_hook_raises():
    with pytest.raises(ValueError, match="degenerate"):
        push_fusion_samples(SampleBatch(np.array([0.0])), SampleBatch(np.array([1.0])))


def test_fusion_outputs_stay_in_unit_interval():
    rng = RngSeed(41).generator()
    x = sample_beta(BetaParams(0.3, 7.0), 10**5, rng)
    y = sample_beta(BetaParams(5.0, 0.2), 10**5, rng)
    z = push_fusion_samples(x, y, redraw=lambda k: (np.full(k, 0.5), np.full(k, 0.5)))
    assert np.all((z.values >= 0.0) & (z.values <= 1.0))


# --- estimators ---------------------------------------------------------------------


def test_mc_estimate_identity_mean():
    batch = sample_beta(BetaParams(1, 1), 10**5, RngSeed(43))
    est = mc_estimate(batch, lambda z: z)
    assert abs(est.value - 0.5) <= 3 * est.stderr
    assert est.stderr == pytest.approx(batch.values.std(ddof=1) / math.sqrt(batch.n), abs=1e-15)


def test_mc_estimate_constant_has_zero_stderr():
    batch = SampleBatch(np.linspace(0.1, 0.9, 100))
    est = mc_estimate(batch, lambda z: np.ones_like(z))
    assert (est.value, est.stderr) == (1.0, 0.0)


def test_mc_estimate_indicator_median():
    batch = sample_beta(BetaParams(1, 1), 10**5, RngSeed(47))
    est = mc_estimate(batch, lambda z: (z <= 0.5).astype(float))
    assert abs(est.value - 0.5) <= 3 * est.stderr


def test_estimate_moments_degenerate():
    with pytest.raises(DegenerateVarianceError):
        estimate_moments(SampleBatch(np.full(50, 0.5)))


def test_estimate_moments_uniform_batch():
    batch = sample_beta(BetaParams(1, 1), 10**6, RngSeed(53))
    m = estimate_moments(batch)
    se_mu = batch.values.std(ddof=1) / math.sqrt(batch.n)
    assert abs(m.mu - 0.5) <= 4 * se_mu
    centered = batch.values - batch.values.mean()
    se_var = math.sqrt((np.mean(centered**4) - m.sigma2**2) / batch.n)
    assert abs(m.sigma2 - 1 / 12) <= 4 * se_var


def test_estimate_moments_product_batch_matches_analytic():
    n = 10**6
    rng = RngSeed(59).generator()
    z = push_product_samples(
        sample_beta(BetaParams(1, 1), n, rng), sample_beta(BetaParams(1, 1), n, rng)
    )
    m = estimate_moments(z)
    target = product_moments_analytic(
        beta_moments(BetaParams(1, 1)), beta_moments(BetaParams(1, 1))
    )
    se_mu = z.values.std(ddof=1) / math.sqrt(n)
    assert abs(m.mu - target.mu) <= 4 * se_mu
    centered = z.values - z.values.mean()
    se_var = math.sqrt((np.mean(centered**4) - m.sigma2**2) / n)
    assert abs(m.sigma2 - target.sigma2) <= 4 * se_var


def test_mean_error_shrinks_as_root_n():
    rng = RngSeed(61).generator()
    sizes = (10**3, 10**4, 10**5)
    errors = np.zeros(len(sizes))
    for _ in range(20):
        params = BetaParams(10.0 - rng.uniform(0, 10), 10.0 - rng.uniform(0, 10))
        mu = beta_moments(params).mu
        for i, n in enumerate(sizes):
            errors[i] += abs(sample_beta(params, n, rng).values.mean() - mu)
    slope = np.polyfit(np.log10(sizes), np.log10(errors / 20), 1)[0]
    assert -0.65 <= slope <= -0.35
