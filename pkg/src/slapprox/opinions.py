"""Binomial/multinomial opinions, their density mappings and the two binomial operators.

A binomial opinion ``(b, d, u, a)`` places belief mass ``b`` on an event,
disbelief ``d`` on its complement, keeps ``u`` uncommitted (``b + d + u = 1``)
and carries a prior probability ``a``.  With the mapping constant ``W`` an
opinion with ``u > 0`` is equivalent to a Beta density, which is what the
operators in this module approximate transformations of.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .densities import BetaParams, DirichletParams
from .errors import (
    DegenerateMeanError,
    DegeneratePriorError,
    InvalidOpinionError,
    MappingRangeError,
    PriorMismatchError,
    ZeroUncertaintyError,
)

#: Mapping constant relating opinion masses to Beta/Dirichlet pseudo-counts.
DEFAULT_W = 2.0

#: Tolerance for simplex and equality checks on opinion components.
SIMPLEX_TOL = 1e-12

#: Opinions with u at or below this are treated as dogmatic (no density image).
DOGMATIC_TOL = 1e-12


@dataclass(frozen=True)
class BinomialOpinion:
    """Point on the 2-simplex with a prior: ``b + d + u = 1``, all in [0, 1]."""

    b: float
    d: float
    u: float
    a: float

    def __post_init__(self):
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "u", float(self.u))
        object.__setattr__(self, "a", float(self.a))


@dataclass(frozen=True)
class MultinomialOpinion:
    """Belief vector over M events plus shared uncertainty: ``sum(b) + u = 1``."""

    b: tuple[float, ...]
    u: float
    a: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "u", float(self.u))
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))


@dataclass(frozen=True)
class OpinionValidity:
    """Verdict of :func:`validate_opinion`; falsy when a constraint failed."""

    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_opinion(op: BinomialOpinion) -> OpinionValidity:
    """Check the opinion invariants and report which constraint failed, if any."""
    for name, value in (("b", op.b), ("d", op.d), ("u", op.u), ("a", op.a)):
        if not math.isfinite(value):
            return OpinionValidity(False, f"{name}={value} is not finite")
        if value < 0.0 or value > 1.0:
            return OpinionValidity(False, f"{name}={value} outside [0, 1]")
    mass = op.b + op.d + op.u
    if abs(mass - 1.0) > SIMPLEX_TOL:
        return OpinionValidity(False, f"mass sum {mass} differs from 1 beyond {SIMPLEX_TOL}")
    return OpinionValidity(True)


def _require_valid(op: BinomialOpinion, role: str) -> None:
    verdict = validate_opinion(op)
    if not verdict:
        raise InvalidOpinionError(f"{role}: {verdict.reason}")


def project_probability(op: BinomialOpinion) -> float:
    """Projected probability ``b + a*u``, the mean of the mapped Beta density."""
    return op.b + op.a * op.u


def _check_w(W: float) -> float:
    W = float(W)
    if not (W > 0.0 and math.isfinite(W)):
        raise ValueError(f"mapping constant W must be positive and finite, got {W}")
    return W


def opinion_to_beta(op: BinomialOpinion, W: float = DEFAULT_W) -> BetaParams:
    """Map an opinion with ``u > 0`` to its Beta density.

    ``alpha = W*(b/u + a)``, ``beta = W*(d/u + 1 - a)``.
    """
    W = _check_w(W)
    if op.u <= DOGMATIC_TOL:
        raise ZeroUncertaintyError(f"dogmatic opinion (u={op.u}) has no Beta image")
    return BetaParams(W * (op.b / op.u + op.a), W * (op.d / op.u + (1.0 - op.a)))


def beta_to_opinion(p: BetaParams, a: float, W: float = DEFAULT_W) -> BinomialOpinion:
    """Map a Beta density back to the opinion with prior ``a``.

    Requires ``alpha >= W*a`` and ``beta >= W*(1 - a)`` so that both
    belief masses are non-negative.
    """
    W = _check_w(W)
    a = float(a)
    if not (0.0 <= a <= 1.0):
        raise MappingRangeError(f"prior a={a} outside [0, 1]")
    s = p.alpha + p.beta
    b = (p.alpha - W * a) / s
    d = (p.beta - W * (1.0 - a)) / s
    if b < -SIMPLEX_TOL or d < -SIMPLEX_TOL:
        raise MappingRangeError(
            f"Beta({p.alpha}, {p.beta}) with a={a}, W={W} maps to negative mass "
            f"(b={b}, d={d})"
        )
    # Round a boundary case (alpha == W*a exactly) onto the simplex.
    return BinomialOpinion(max(b, 0.0), max(d, 0.0), W / s, a)


def opinion_to_dirichlet(op: MultinomialOpinion, W: float = DEFAULT_W) -> DirichletParams:
    """Map a multinomial opinion with ``u > 0`` to its Dirichlet density."""
    W = _check_w(W)
    if op.u <= DOGMATIC_TOL:
        raise ZeroUncertaintyError(f"dogmatic opinion (u={op.u}) has no Dirichlet image")
    b = np.asarray(op.b, dtype=float)
    a = np.asarray(op.a, dtype=float)
    if b.shape != a.shape:
        raise InvalidOpinionError("belief and prior vectors differ in length")
    return DirichletParams(tuple(W * (b / op.u + a)))


def dirichlet_to_opinion(
    p: DirichletParams, a, W: float = DEFAULT_W
) -> MultinomialOpinion:
    """Map a Dirichlet density back to the multinomial opinion with prior vector ``a``."""
    W = _check_w(W)
    alpha = np.asarray(p.alpha, dtype=float)
    a = np.asarray(a, dtype=float)
    if alpha.shape != a.shape:
        raise MappingRangeError("prior vector length does not match parameter vector")
    if np.any(a < 0.0) or abs(a.sum() - 1.0) > SIMPLEX_TOL:
        raise MappingRangeError("prior vector must be a probability distribution")
    total = alpha.sum()
    b = (alpha - W * a) / total
    if np.any(b < -SIMPLEX_TOL):
        raise MappingRangeError(
            f"Dirichlet{tuple(alpha)} with prior {tuple(a)} maps to negative belief mass"
        )
    b = np.maximum(b, 0.0)
    return MultinomialOpinion(tuple(b), W / total, tuple(a))


def multiply(x: BinomialOpinion, y: BinomialOpinion) -> BinomialOpinion:
    """Product of two binomial opinions over distinct events.

    The result approximates the distribution of the product of the mapped
    Beta variables; its projected probability is exactly the product of the
    operands' projected probabilities and ``d = d_x + d_y - d_x*d_y``.
    """
    _require_valid(x, "left operand")
    _require_valid(y, "right operand")
    den = 1.0 - x.a * y.a
    if den <= 0.0:
        raise DegeneratePriorError("product undefined for a_x = a_y = 1")
    b = x.b * y.b + ((1.0 - x.a) * y.a * x.b * y.u + x.a * (1.0 - y.a) * x.u * y.b) / den
    d = x.d + y.d - x.d * y.d
    u = x.u * y.u + ((1.0 - y.a) * x.b * y.u + (1.0 - x.a) * x.u * y.b) / den
    return BinomialOpinion(b, d, u, x.a * y.a)


def multiply_many(ops: list[BinomialOpinion]) -> BinomialOpinion:
    """Left-associated fold of :func:`multiply` over one or more opinions."""
    if not ops:
        raise ValueError("multiply_many needs at least one opinion")
    acc = ops[0]
    for i, op in enumerate(ops[1:], start=1):
        try:
            acc = multiply(acc, op)
        except InvalidOpinionError as exc:
            raise InvalidOpinionError(f"factor {i}: {exc}") from exc
        except DegeneratePriorError as exc:
            raise DegeneratePriorError(f"factor {i}: {exc}") from exc
    return acc


def fuse(x: BinomialOpinion, y: BinomialOpinion, W: float = DEFAULT_W) -> BinomialOpinion:
    """Fuse two binomial opinions on the same event with a shared prior.

    Moment-matching approximation of ``Z = XY / (XY + (1-X)(1-Y))`` for the
    mapped Beta variables: the fused mean ``m`` is the fusion map applied to
    the operands' projected probabilities, and the strength ``s`` is the
    variance-matched strength capped so that both belief masses stay
    non-negative.  The result satisfies ``project_probability == m`` and
    ``u = W/s``.
    """
    W = _check_w(W)
    _require_valid(x, "left operand")
    _require_valid(y, "right operand")
    if abs(x.a - y.a) > SIMPLEX_TOL:
        raise PriorMismatchError(f"fusion requires equal priors, got {x.a} and {y.a}")
    if x.u <= DOGMATIC_TOL or y.u <= DOGMATIC_TOL:
        raise ZeroUncertaintyError("fusion requires u > 0 on both operands")
    a = x.a

    num = x.b * y.b + y.b * a * x.u + x.b * a * y.u + a * a * x.u * y.u
    den = 2.0 * num + 1.0 - y.b - a * y.u - x.b - a * x.u
    if den <= 1e-15:
        raise DegenerateMeanError(f"fused-mean denominator {den} is not positive")
    # rounding can push the ratio an ulp outside the unit interval
    m = min(max(num / den, 0.0), 1.0)

    # Variance-matched strength: each operand contributes the Bernoulli
    # variance of its projected probability scaled by (strength + 1).
    px = x.b + a * x.u
    py = y.b + a * y.u
    gx = px * (1.0 - px)
    gy = py * (1.0 - py)
    cx = W / x.u + 1.0
    cy = W / y.u + 1.0
    t3_den = m * (1.0 - m) * (cy * gy + cx * gx)
    t3 = (cx * cy * gx * gy) / t3_den - 1.0 if t3_den > 0.0 else -math.inf

    t1 = W * a / m if m > 0.0 else (0.0 if a == 0.0 else math.inf)
    t2 = W * (1.0 - a) / (1.0 - m) if m < 1.0 else (0.0 if a == 1.0 else math.inf)
    s = max(t1, t2, t3)
    if not math.isfinite(s):
        # the fused mean collapsed onto 0 or 1 while the prior is interior,
        # so no finite strength keeps both belief masses non-negative
        raise DegenerateMeanError(f"fused mean {m} admits no finite strength")

    # Sharing u = W/s across the three components keeps b + a*u == m exact;
    # the max() can leave the capped mass one ulp below zero.
    u = W / s
    b = max(m - a * u, 0.0)
    d = max((1.0 - m) - (1.0 - a) * u, 0.0)
    return BinomialOpinion(b, d, u, a)
