"""Subjective-logic binomial operators with Monte Carlo error measurement.

The opinion algebra (multiplication, fusion) and its Beta/Dirichlet mappings
live next to the measurement stack used to quantify how well those operators
approximate the true transformed densities: seeded sampling, moment
estimation, logit-space KDE, and L1/total-variation distance estimation.
"""

from .densities import (
    BetaParams,
    DirichletParams,
    GaussianParams,
    MomentPair,
    beta_density,
    beta_from_moments,
    beta_moments,
    gaussian_density,
    gaussian_from_moments,
    limit_case_density,
    product_moments_analytic,
)
from .distance import DensityEvaluator, integral_distance, total_variation
from .kde import (
    KdeModel,
    empirical_std,
    fit_logit_kde,
    kde_bias_bound,
    kde_density,
    silverman_bandwidth,
)
from .opinions import (
    DEFAULT_W,
    BinomialOpinion,
    MultinomialOpinion,
    OpinionValidity,
    beta_to_opinion,
    dirichlet_to_opinion,
    fuse,
    multiply,
    multiply_many,
    opinion_to_beta,
    opinion_to_dirichlet,
    project_probability,
    validate_opinion,
)
from .sampling import (
    EstimatorResult,
    RngSeed,
    SampleBatch,
    estimate_moments,
    mc_estimate,
    push_fusion_samples,
    push_product_samples,
    sample_beta,
    sample_random_beta_params,
    sample_random_opinion,
)

__all__ = [
    "BetaParams",
    "BinomialOpinion",
    "DEFAULT_W",
    "DensityEvaluator",
    "DirichletParams",
    "EstimatorResult",
    "GaussianParams",
    "KdeModel",
    "MomentPair",
    "MultinomialOpinion",
    "OpinionValidity",
    "RngSeed",
    "SampleBatch",
    "beta_density",
    "beta_from_moments",
    "beta_moments",
    "beta_to_opinion",
    "dirichlet_to_opinion",
    "empirical_std",
    "estimate_moments",
    "fit_logit_kde",
    "fuse",
    "gaussian_density",
    "gaussian_from_moments",
    "integral_distance",
    "kde_bias_bound",
    "kde_density",
    "limit_case_density",
    "mc_estimate",
    "multiply",
    "multiply_many",
    "opinion_to_beta",
    "opinion_to_dirichlet",
    "product_moments_analytic",
    "project_probability",
    "push_fusion_samples",
    "push_product_samples",
    "sample_beta",
    "sample_random_beta_params",
    "sample_random_opinion",
    "silverman_bandwidth",
    "total_variation",
    "validate_opinion",
]

__version__ = "0.1.0"
