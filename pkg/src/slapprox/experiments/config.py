"""Experiment configuration shared by the four harness protocols."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConfigError
from ..opinions import BinomialOpinion
from ..sampling import RngSeed

DEFAULT_LADDER = (1_000, 10_000, 100_000)

OPERATORS = ("product", "fusion")
STARTS = ("opinion", "pdf")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs for one harness run; immutable and fully determines the output."""

    operator: str = "product"
    start: str = "opinion"
    n_samples: int = 100_000
    n_reps: int = 100
    m_integration: int = 1_000
    l_factors: tuple[int, int] = (2, 5)
    seed: RngSeed = field(default=RngSeed(0))
    output_path: str | None = None
    eps_clamp: float = 1e-9
    out_format: str = "csv"
    #: sample-count sweep used by the quantitative protocol only
    n_ladder: tuple[int, ...] | None = None
    #: fixed operands for the qualitative protocol (otherwise sampled)
    operands: tuple[BinomialOpinion, BinomialOpinion] | None = None

    @property
    def ladder(self) -> tuple[int, ...]:
        return self.n_ladder if self.n_ladder is not None else DEFAULT_LADDER

    def validate(self) -> None:
        if self.operator not in OPERATORS:
            raise ConfigError(f"operator must be one of {OPERATORS}, got {self.operator!r}")
        if self.start not in STARTS:
            raise ConfigError(f"start must be one of {STARTS}, got {self.start!r}")
        if self.out_format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.out_format!r}")
        if self.n_samples < 10:
            raise ConfigError(f"n_samples must be at least 10, got {self.n_samples}")
        if self.n_reps < 1:
            raise ConfigError(f"n_reps must be at least 1, got {self.n_reps}")
        if self.m_integration < 2:
            raise ConfigError(f"m_integration must be at least 2, got {self.m_integration}")
        lo, hi = self.l_factors
        if not (2 <= lo <= hi <= 5):
            raise ConfigError(f"l_factors range must lie within [2, 5], got {self.l_factors}")
        if not (0.0 < self.eps_clamp < 0.5):
            raise ConfigError(f"eps_clamp must lie in (0, 0.5), got {self.eps_clamp}")
        if any(n < 10 for n in self.ladder):
            raise ConfigError(f"ladder entries must be at least 10, got {self.ladder}")
        if self.operator == "fusion" and self.start == "pdf":
            raise ConfigError(
                "fusion requires start-compatible priors: independently sampled Beta "
                "pdfs map to opinions with unequal priors, so start must be 'opinion'"
            )
