"""Exception types shared across the package."""


class OpinionError(ValueError):
    """Base class for errors raised by opinion algebra and mappings."""


class InvalidOpinionError(OpinionError):
    """An operand does not satisfy the opinion invariants."""


class ZeroUncertaintyError(OpinionError):
    """A dogmatic opinion (u ~ 0) was passed where a density image is needed."""


class MappingRangeError(OpinionError):
    """Density parameters lie outside the image of the opinion mapping."""


class DegeneratePriorError(OpinionError):
    """Opinion product is undefined because both priors equal one."""


class PriorMismatchError(OpinionError):
    """Fusion operands must share the same prior."""


class DegenerateMeanError(OpinionError):
    """The fused-mean denominator vanished (operands are jointly certain and contradictory)."""


class InfeasibleMomentsError(ValueError):
    """No distribution on [0, 1] has the requested mean/variance pair."""


class DegenerateVarianceError(ValueError):
    """A sample batch with zero spread cannot support the requested estimate."""


class ConfigError(ValueError):
    """An experiment configuration violates its invariants."""


class ExperimentError(RuntimeError):
    """A harness run hit a fatal condition (e.g. excessive redraw rate)."""
