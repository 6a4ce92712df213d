"""Experiment harness: configuration, protocols, and file emission."""

from .config import DEFAULT_LADDER, ExperimentConfig
from .runner import (
    AggregateStat,
    DensityTable,
    FUSION_LABELS,
    LIMIT_LABELS,
    MULTI_LABELS,
    PRODUCT_LABELS,
    RunRecord,
    aggregate_stats,
    run_limit_case,
    run_multi_product,
    run_qualitative,
    run_quantitative,
)

__all__ = [
    "AggregateStat",
    "DEFAULT_LADDER",
    "DensityTable",
    "ExperimentConfig",
    "FUSION_LABELS",
    "LIMIT_LABELS",
    "MULTI_LABELS",
    "PRODUCT_LABELS",
    "RunRecord",
    "aggregate_stats",
    "run_limit_case",
    "run_multi_product",
    "run_qualitative",
    "run_quantitative",
]
