"""Gaussian kernel density estimation in logit space for samples on [0, 1].

A plain Gaussian KDE spills probability mass outside [0, 1], so samples are
clamped away from the endpoints, mapped through ``logit(x) = ln(x/(1-x))``,
smoothed with a Gaussian kernel sized by the Silverman rule, and evaluated
back on [0, 1] with the Jacobian factor ``1/(z(1-z))``.

Evaluation is the exact O(n*m) kernel sum.  Kernel terms farther than
``_EXACT_CUTOFF`` bandwidths from the query underflow to exactly 0.0 in
double precision, so they are skipped without changing the result; queries
are processed independently, which keeps the work distributable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVarianceError
from .sampling import SampleBatch

#: exp(-t^2/2) is exactly 0.0 in IEEE double for |t| above ~38.6.
_EXACT_CUTOFF = 38.7

_SQRT_2PI = math.sqrt(2.0 * math.pi)

try:
    import numba

    @numba.njit(cache=True, fastmath=True)
    def _kernel_sum(queries, samples_sorted, w):  # pragma: no cover - jitted
        out = np.empty(queries.shape[0])
        inv = 1.0 / w
        radius = _EXACT_CUTOFF * w
        for j in range(queries.shape[0]):
            x = queries[j]
            lo = np.searchsorted(samples_sorted, x - radius)
            hi = np.searchsorted(samples_sorted, x + radius)
            acc = 0.0
            for i in range(lo, hi):
                t = (x - samples_sorted[i]) * inv
                acc += np.exp(-0.5 * t * t)
            out[j] = acc
        return out

except ImportError:  # pragma: no cover - exercised only without numba

    def _kernel_sum(queries, samples_sorted, w):
        out = np.empty(queries.shape[0])
        inv = 1.0 / w
        radius = _EXACT_CUTOFF * w
        for j, x in enumerate(queries):
            lo, hi = np.searchsorted(samples_sorted, (x - radius, x + radius))
            t = (x - samples_sorted[lo:hi]) * inv
            out[j] = np.exp(-0.5 * t * t).sum()
        return out


@dataclass(frozen=True)
class KdeModel:
    """Fitted logit-space Gaussian KDE; immutable once built."""

    logit_samples: np.ndarray  # ascending order
    w: float
    n: int
    eps_clamp: float

    def __post_init__(self):
        samples = np.asarray(self.logit_samples, dtype=float).copy()
        samples.setflags(write=False)
        object.__setattr__(self, "logit_samples", samples)
        if not (self.w > 0.0 and math.isfinite(self.w)):
            raise ValueError(f"bandwidth {self.w} must be positive and finite")
        if self.n != samples.size:
            raise ValueError("sample count does not match the sample array")
        if samples.size and np.any(np.diff(samples) < 0.0):
            raise ValueError("logit samples must be in ascending order")


def empirical_std(x) -> float:
    """Standard deviation with divisor N-1; accepts a batch or any array-like."""
    values = x.values if isinstance(x, SampleBatch) else np.asarray(x, dtype=float)
    if values.size < 2:
        raise ValueError("need at least two values")
    return float(values.std(ddof=1))


def silverman_bandwidth(sigma_hat: float, n: int) -> float:
    """Kernel width ``1.06 * sigma_hat * n**(-1/5)``."""
    if not (sigma_hat > 0.0 and math.isfinite(sigma_hat)):
        raise ValueError(f"sigma_hat {sigma_hat} must be positive and finite")
    if n < 1:
        raise ValueError("need n >= 1")
    return 1.06 * sigma_hat * float(n) ** -0.2


def _logit(z: np.ndarray) -> np.ndarray:
    return np.log(z) - np.log1p(-z)


def fit_logit_kde(batch: SampleBatch, eps_clamp: float = 1e-9) -> KdeModel:
    """Clamp to [eps, 1-eps], logit-transform, and size the kernel by Silverman."""
    if not (0.0 < eps_clamp < 0.5):
        raise ValueError(f"eps_clamp {eps_clamp} outside (0, 0.5)")
    if batch.n < 2:
        raise ValueError("need at least two samples to fit")
    transformed = _logit(np.clip(batch.values, eps_clamp, 1.0 - eps_clamp))
    sigma = transformed.std(ddof=1)
    if sigma == 0.0:
        raise DegenerateVarianceError("all samples identical after clamping")
    return KdeModel(np.sort(transformed), silverman_bandwidth(float(sigma), batch.n), batch.n, eps_clamp)


def kde_density(model: KdeModel, z):
    """Density on (0, 1): back-transformed kernel sum over the logit samples."""
    z_arr = np.asarray(z, dtype=float)
    zc = np.clip(np.atleast_1d(z_arr), model.eps_clamp, 1.0 - model.eps_clamp)
    kernel = _kernel_sum(_logit(zc), model.logit_samples, model.w)
    out = kernel / (model.n * model.w * _SQRT_2PI * zc * (1.0 - zc))
    return float(out[0]) if z_arr.ndim == 0 else out


def kde_bias_bound(n: int) -> float:
    """Order of magnitude of the KDE bias on [0, 1]: ``(0.1 * n**(-1/5))**2``."""
    if n < 1:
        raise ValueError("need n >= 1")
    return (0.1 * float(n) ** -0.2) ** 2
