"""Seeded random generation and Monte Carlo estimators.

Randomness flows through :class:`RngSeed`, a (seed, stream) pair backed by
the counter-based Philox generator, so repetitions can be derived as
independent substreams and reproduced bitwise.  Beta draws use the ratio of
two Gamma draws, which is valid over the whole shape range the experiments
sample from.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densities import BetaParams, MomentPair
from .errors import DegenerateVarianceError
from .opinions import BinomialOpinion

#: Fusion pairs with a smaller pushforward denominator are resampled.
FUSION_DENOMINATOR_GUARD = 1e-300


@dataclass(frozen=True)
class RngSeed:
    """Seed plus stream index; identical pairs reproduce identical draws."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError(f"seed {self.seed} outside [0, 2^64)")
        if int(self.stream) < 0:
            raise ValueError(f"stream {self.stream} must be non-negative")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "stream", int(self.stream))

    def generator(self, *subkey: int) -> np.random.Generator:
        """Generator for this stream, optionally narrowed by extra indices."""
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream, *subkey))
        return np.random.Generator(np.random.Philox(seq))


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return seed.generator()


@dataclass(frozen=True)
class SampleBatch:
    """Ordered draws in [0, 1] plus a description of the pipeline that made them."""

    values: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("SampleBatch needs a non-empty 1-D array")
        if not np.all((values >= 0.0) & (values <= 1.0)):
            raise ValueError("SampleBatch values must lie in [0, 1]")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class EstimatorResult:
    """Monte Carlo estimate with its standard error ``sample_std/sqrt(n)``."""

    value: float
    stderr: float
    n: int


def _gamma_ratio(rng: np.random.Generator, p: BetaParams, n: int) -> np.ndarray:
    """Beta draws as g1/(g1+g2); redraws the rare all-underflow pairs."""
    g1 = rng.standard_gamma(p.alpha, size=n)
    g2 = rng.standard_gamma(p.beta, size=n)
    total = g1 + g2
    bad = total == 0.0
    while np.any(bad):
        k = int(bad.sum())
        g1[bad] = rng.standard_gamma(p.alpha, size=k)
        g2[bad] = rng.standard_gamma(p.beta, size=k)
        total = g1 + g2
        bad = total == 0.0
    return g1 / total


def sample_beta(p: BetaParams, n: int, seed) -> SampleBatch:
    """``n`` i.i.d. draws from the Beta density, deterministic given the seed."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = _as_generator(seed)
    values = _gamma_ratio(rng, p, int(n))
    tag = f"seed={seed.seed}/{seed.stream}" if isinstance(seed, RngSeed) else "rng"
    return SampleBatch(values, f"beta({p.alpha:g},{p.beta:g})[n={n},{tag}]")


def sample_random_opinion(seed) -> BinomialOpinion:
    """Opinion with (b, d, u) uniform on the simplex and a uniform prior."""
    rng = _as_generator(seed)
    b, d, u = rng.dirichlet((1.0, 1.0, 1.0))
    return BinomialOpinion(b, d, u, rng.uniform())


def sample_random_beta_params(seed) -> BetaParams:
    """Beta shapes drawn independently and uniformly from (0, 10]."""
    rng = _as_generator(seed)
    # uniform() covers [0, 10); reflecting makes the range (0, 10] so the
    # excluded endpoint is the invalid shape 0.
    return BetaParams(10.0 - rng.uniform(0.0, 10.0), 10.0 - rng.uniform(0.0, 10.0))


def push_product_samples(x: SampleBatch, y: SampleBatch) -> SampleBatch:
    """Elementwise product ``z_i = x_i * y_i``."""
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} vs {y.n}")
    return SampleBatch(x.values * y.values, f"product({x.provenance};{y.provenance})")


def push_fusion_samples(x: SampleBatch, y: SampleBatch, redraw=None) -> SampleBatch:
    """Elementwise fusion ``z_i = x_i*y_i / (x_i*y_i + (1-x_i)*(1-y_i))``.

    Pairs whose denominator underflows (one sample exactly 0, the other 1)
    are replaced with fresh draws from ``redraw(k)``, which must return two
    arrays of ``k`` new samples; the replacement count lands in the
    provenance.  Without a redraw hook such pairs raise.
    """
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} vs {y.n}")
    xv = x.values.copy()
    yv = y.values.copy()
    redraws = 0
    while True:
        den = xv * yv + (1.0 - xv) * (1.0 - yv)
        bad = den < FUSION_DENOMINATOR_GUARD
        if not np.any(bad):
            break
        if redraw is None:
            raise ValueError(
                "degenerate fusion pairs present and no redraw hook was given"
            )
        k = int(bad.sum())
        redraws += k
        xv[bad], yv[bad] = redraw(k)
    z = xv * yv / den
    tag = f"fusion({x.provenance};{y.provenance})"
    if redraws:
        tag += f"[redraws={redraws}]"
    return SampleBatch(z, tag)


def mc_estimate(batch: SampleBatch, f) -> EstimatorResult:
    """Sample mean of ``f`` over the batch with its standard error."""
    if batch.n < 2:
        raise ValueError("need n >= 2 for a standard error")
    fv = np.asarray(f(batch.values), dtype=float)
    fv = np.broadcast_to(fv, batch.values.shape)
    return EstimatorResult(float(fv.mean()), float(fv.std(ddof=1) / np.sqrt(batch.n)), batch.n)


def estimate_moments(batch: SampleBatch) -> MomentPair:
    """Sample mean and unbiased sample variance of the batch."""
    if batch.n < 2:
        raise ValueError("need n >= 2 to estimate a variance")
    sigma2 = float(batch.values.var(ddof=1))
    if sigma2 <= 0.0:
        raise DegenerateVarianceError("all samples identical; variance is zero")
    return MomentPair(float(batch.values.mean()), sigma2)
