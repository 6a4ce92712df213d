"""Parametric densities on [0, 1], moment formulas and their inversions.

Beta evaluation happens in log space so large shape parameters do not
overflow the Beta function.  Endpoint poles (shape < 1) are reported with an
``inf`` sentinel instead of raising; integration code never samples the exact
endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln

from .errors import InfeasibleMomentsError


@dataclass(frozen=True)
class BetaParams:
    """Shape pair of a Beta density; both strictly positive and finite."""

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"Beta shape {name}={v} must be positive and finite")


@dataclass(frozen=True)
class GaussianParams:
    """Mean and variance of a Gaussian density; variance strictly positive."""

    mu: float
    sigma2: float

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        if not math.isfinite(self.mu):
            raise ValueError(f"Gaussian mean {self.mu} must be finite")
        if not (self.sigma2 > 0.0 and math.isfinite(self.sigma2)):
            raise ValueError(f"Gaussian variance {self.sigma2} must be positive and finite")


@dataclass(frozen=True)
class DirichletParams:
    """Shape vector of a Dirichlet density over M >= 2 events."""

    alpha: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        if len(self.alpha) < 2:
            raise ValueError("Dirichlet needs at least two components")
        if any(not (v > 0.0 and math.isfinite(v)) for v in self.alpha):
            raise ValueError(f"Dirichlet shapes must be positive and finite, got {self.alpha}")


@dataclass(frozen=True)
class MomentPair:
    """Mean/variance pair realisable by a distribution on [0, 1].

    Feasibility requires ``0 < mu < 1`` and ``0 < sigma2 < mu*(1 - mu)``.
    """

    mu: float
    sigma2: float

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        if not (0.0 < self.mu < 1.0):
            raise InfeasibleMomentsError(f"mean {self.mu} outside (0, 1)")
        if not (self.sigma2 > 0.0 and math.isfinite(self.sigma2)):
            raise InfeasibleMomentsError(f"variance {self.sigma2} must be positive and finite")
        if self.sigma2 >= self.mu * (1.0 - self.mu):
            raise InfeasibleMomentsError(
                f"variance {self.sigma2} >= mu*(1-mu) = {self.mu * (1.0 - self.mu)}"
            )


def beta_density(p: BetaParams, z):
    """Beta density at ``z`` in [0, 1]; ``inf`` at a divergent endpoint."""
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0.0) or np.any(z_arr > 1.0):
        raise ValueError("beta_density is defined on [0, 1]")
    log_norm = betaln(p.alpha, p.beta)
    out = np.empty_like(z_arr)
    interior = (z_arr > 0.0) & (z_arr < 1.0)
    zi = z_arr[interior]
    out[interior] = np.exp(
        (p.alpha - 1.0) * np.log(zi) + (p.beta - 1.0) * np.log1p(-zi) - log_norm
    )
    at0 = z_arr == 0.0
    if np.any(at0):
        out[at0] = math.inf if p.alpha < 1.0 else (p.beta if p.alpha == 1.0 else 0.0)
    at1 = z_arr == 1.0
    if np.any(at1):
        out[at1] = math.inf if p.beta < 1.0 else (p.alpha if p.beta == 1.0 else 0.0)
    return out if out.ndim else float(out)


def gaussian_density(p: GaussianParams, z):
    """Gaussian density with mean ``mu`` and variance ``sigma2`` at ``z``."""
    z_arr = np.asarray(z, dtype=float)
    out = np.exp(-0.5 * (z_arr - p.mu) ** 2 / p.sigma2) / math.sqrt(2.0 * math.pi * p.sigma2)
    return out if out.ndim else float(out)


def beta_moments(p: BetaParams) -> MomentPair:
    """Mean ``alpha/(alpha+beta)`` and variance of a Beta density."""
    s = p.alpha + p.beta
    return MomentPair(p.alpha / s, p.alpha * p.beta / (s * s * (s + 1.0)))


def product_moments_analytic(x: MomentPair, y: MomentPair) -> MomentPair:
    """Moments of the product of two independent variables.

    ``mu = mu_x*mu_y`` and
    ``sigma2 = mu_x^2*sigma2_y + mu_y^2*sigma2_x + sigma2_x*sigma2_y``.
    """
    mu = x.mu * y.mu
    sigma2 = x.mu**2 * y.sigma2 + y.mu**2 * x.sigma2 + x.sigma2 * y.sigma2
    return MomentPair(mu, sigma2)


def beta_from_moments(m: MomentPair) -> BetaParams:
    """Beta parameters matching the given mean and variance."""
    if m.sigma2 >= m.mu * (1.0 - m.mu):
        raise InfeasibleMomentsError(
            f"variance {m.sigma2} >= mu*(1-mu) = {m.mu * (1.0 - m.mu)}"
        )
    t = m.sigma2 + m.mu * m.mu - m.mu
    return BetaParams(-m.mu * t / m.sigma2, (m.mu - 1.0) * t / m.sigma2)


def gaussian_from_moments(m: MomentPair) -> GaussianParams:
    """Gaussian with the given mean and variance (parameters copied verbatim)."""
    return GaussianParams(m.mu, m.sigma2)


def limit_case_density(z):
    """Exact density ``-ln(z)`` of the product of two uniform variables, on (0, 1]."""
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0.0) or np.any(z_arr > 1.0):
        raise ValueError("limit_case_density is defined on (0, 1]")
    out = -np.log(z_arr)
    return out if out.ndim else float(out)
