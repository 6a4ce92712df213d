"""The four measurement protocols behind the CLI.

Each repetition owns a Philox substream derived from the run seed and the
repetition index, so repetitions are independent work units that could run
concurrently while keeping the output bitwise reproducible.  Repetitions that
fail on a degenerate draw are redrawn from the same substream and counted; a
redraw rate above 10% aborts the run because it would bias the operand
distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..densities import (
    BetaParams,
    beta_density,
    beta_from_moments,
    beta_moments,
    gaussian_density,
    gaussian_from_moments,
    limit_case_density,
    product_moments_analytic,
)
from ..distance import abs_gap_estimate
from ..errors import ConfigError, ExperimentError
from ..kde import fit_logit_kde, kde_bias_bound, kde_density
from ..opinions import (
    DEFAULT_W,
    BinomialOpinion,
    beta_to_opinion,
    fuse,
    multiply,
    multiply_many,
    opinion_to_beta,
)
from ..sampling import estimate_moments, push_fusion_samples, push_product_samples, sample_beta
from .config import ExperimentConfig

PRODUCT_LABELS = ("sl", "gauss_mc", "beta_mc", "gauss_an", "beta_an")
FUSION_LABELS = ("sl", "gauss_mc", "beta_mc")
LIMIT_LABELS = ("kde", "sl", "beta_mc", "beta_an")
MULTI_LABELS = ("sl", "beta_an")

# Substream purpose tags keep the four protocols' draws disjoint.
_QUALITATIVE, _QUANTITATIVE, _LIMIT, _MULTI = 1, 2, 3, 4


@dataclass(frozen=True)
class RunRecord:
    """One repetition's distance estimate for one approximant."""

    operator: str
    start: str
    n_samples: int
    l_factors: int | None
    rep: int
    approximant: str
    distance: float
    stderr: float


@dataclass(frozen=True)
class AggregateStat:
    """Mean/std of the distance across repetitions for one approximant."""

    operator: str
    start: str
    n_samples: int
    l_factors: int | None
    approximant: str
    mean: float
    std: float
    reps: int
    rejections: int = 0
    bias_gate_ok: bool = True


@dataclass(frozen=True)
class DensityTable:
    """Per-grid-point density columns emitted by the qualitative protocol."""

    z: np.ndarray
    columns: dict[str, np.ndarray | None]
    meta: dict


def aggregate_stats(records: list[RunRecord]) -> list[AggregateStat]:
    """Group records by approximant/size and reduce to mean and sample std."""
    if not records:
        raise ValueError("no records to aggregate")
    groups: dict[tuple, list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.operator, r.start, r.n_samples, r.l_factors, r.approximant), []).append(r)
    out = []
    for key in sorted(groups, key=lambda k: (k[0], k[1], k[2], k[3] or 0, k[4])):
        rows = groups[key]
        dists = np.array([r.distance for r in rows])
        std = float(dists.std(ddof=1)) if len(rows) > 1 else 0.0
        out.append(AggregateStat(*key, mean=float(dists.mean()), std=std, reps=len(rows)))
    return out


def _draw_opinion(rng: np.random.Generator) -> BinomialOpinion:
    b, d, u = rng.dirichlet((1.0, 1.0, 1.0))
    return BinomialOpinion(b, d, u, rng.uniform())


def _draw_same_prior_opinions(rng: np.random.Generator) -> tuple[BinomialOpinion, BinomialOpinion]:
    b1, d1, u1 = rng.dirichlet((1.0, 1.0, 1.0))
    b2, d2, u2 = rng.dirichlet((1.0, 1.0, 1.0))
    a = rng.uniform()
    return BinomialOpinion(b1, d1, u1, a), BinomialOpinion(b2, d2, u2, a)


def _draw_pdf_operand(rng: np.random.Generator) -> tuple[BetaParams, BinomialOpinion, int]:
    """Beta operand with its opinion image under the prior a = mean.

    With that prior the mapping needs alpha + beta >= W; smaller pairs are
    resampled and counted.
    """
    rejections = 0
    while True:
        alpha = 10.0 - rng.uniform(0.0, 10.0)
        beta = 10.0 - rng.uniform(0.0, 10.0)
        if alpha + beta >= DEFAULT_W:
            p = BetaParams(alpha, beta)
            return p, beta_to_opinion(p, alpha / (alpha + beta)), rejections
        rejections += 1


def _beta_pdf(params: BetaParams):
    return lambda z: beta_density(params, z)


def _gauss_pdf(params):
    return lambda z: gaussian_density(params, z)


def _operator_rep(cfg: ExperimentConfig, n_samples: int, rng: np.random.Generator):
    """Draw operands, build every approximant and the KDE reference.

    Returns (label -> pdf callable, fitted KDE model, operand rejections).
    """
    rejections = 0
    if cfg.start == "opinion":
        if cfg.operator == "fusion":
            ox, oy = _draw_same_prior_opinions(rng)
        else:
            ox, oy = _draw_opinion(rng), _draw_opinion(rng)
        px, py = opinion_to_beta(ox), opinion_to_beta(oy)
    else:
        px, ox, r1 = _draw_pdf_operand(rng)
        py, oy, r2 = _draw_pdf_operand(rng)
        rejections = r1 + r2

    if cfg.operator == "fusion":
        oz = fuse(ox, oy)
    else:
        oz = multiply(ox, oy)
    sl_params = opinion_to_beta(oz)

    bx = sample_beta(px, n_samples, rng)
    by = sample_beta(py, n_samples, rng)
    if cfg.operator == "fusion":
        redraw = lambda k: (sample_beta(px, k, rng).values, sample_beta(py, k, rng).values)
        batch = push_fusion_samples(bx, by, redraw=redraw)
    else:
        batch = push_product_samples(bx, by)

    model = fit_logit_kde(batch, cfg.eps_clamp)
    mom_mc = estimate_moments(batch)
    evals = {
        "sl": _beta_pdf(sl_params),
        "gauss_mc": _gauss_pdf(gaussian_from_moments(mom_mc)),
        "beta_mc": _beta_pdf(beta_from_moments(mom_mc)),
    }
    if cfg.operator == "product":
        mom_an = product_moments_analytic(beta_moments(px), beta_moments(py))
        evals["gauss_an"] = _gauss_pdf(gaussian_from_moments(mom_an))
        evals["beta_an"] = _beta_pdf(beta_from_moments(mom_an))
    return evals, model, rejections


def _redraw_loop(rep_body, redraw_budget: int):
    """Run one repetition, redrawing on degenerate draws up to the budget."""
    redraws = 0
    while True:
        try:
            return rep_body(), redraws
        except ValueError as exc:
            redraws += 1
            if redraws > redraw_budget:
                raise ExperimentError(
                    f"redraw rate exceeded 10% of repetitions: {exc}"
                ) from exc


def _distances(evals: dict, reference: np.ndarray, points: np.ndarray) -> dict:
    return {label: abs_gap_estimate(pdf(points), reference) for label, pdf in evals.items()}


def run_quantitative(cfg: ExperimentConfig):
    """Distance of each approximant to the KDE reference across the N ladder.

    Returns (records, aggregates, meta).
    """
    cfg.validate()
    labels = FUSION_LABELS if cfg.operator == "fusion" else PRODUCT_LABELS
    records: list[RunRecord] = []
    aggregates: list[AggregateStat] = []
    meta = {"redraws": 0, "operand_rejections": 0, "rep_bias_gate_violations": 0}
    budget = max(1, math.ceil(0.1 * cfg.n_reps))
    for n_index, n_samples in enumerate(cfg.ladder):
        n_records: list[RunRecord] = []
        redraws_here = 0
        for rep in range(cfg.n_reps):
            rng = cfg.seed.generator(_QUANTITATIVE, n_index, rep)

            def body():
                evals, model, rejections = _operator_rep(cfg, n_samples, rng)
                points = rng.uniform(cfg.eps_clamp, 1.0 - cfg.eps_clamp, cfg.m_integration)
                reference = kde_density(model, points)
                if abs_gap_estimate(reference, reference).value != 0.0:
                    raise ExperimentError("KDE self-distance is not zero")
                return _distances(evals, reference, points), rejections

            (dists, rejections), redraws = _redraw_loop(body, budget - redraws_here)
            redraws_here += redraws
            meta["operand_rejections"] += rejections
            for label in labels:
                est = dists[label]
                n_records.append(
                    RunRecord(cfg.operator, cfg.start, n_samples, None, rep, label, est.value, est.stderr)
                )
            if kde_bias_bound(n_samples) > 0.01 * min(d.value for d in dists.values()):
                meta["rep_bias_gate_violations"] += 1
        meta["redraws"] += redraws_here
        stats = aggregate_stats(n_records)
        gate_ok = kde_bias_bound(n_samples) <= 0.01 * min(s.mean for s in stats)
        aggregates.extend(
            replace(s, rejections=redraws_here, bias_gate_ok=gate_ok) for s in stats
        )
        records.extend(n_records)
    return records, aggregates, meta


def run_limit_case(cfg: ExperimentConfig):
    """Distances against the exact product-of-uniforms density ``-ln z``.

    Operands are pinned to Beta(1, 1) with prior 1/2 (vacuous opinions), so
    the `sl` and `beta_an` approximants are fixed and only the KDE and the
    MC moment estimates vary across repetitions.
    """
    cfg.validate()
    if cfg.operator != "product":
        raise ConfigError("the limit case is defined for the product operator")
    unit = BetaParams(1.0, 1.0)
    vacuous = beta_to_opinion(unit, 0.5)
    sl_params = opinion_to_beta(multiply(vacuous, vacuous))
    mom_an = product_moments_analytic(beta_moments(unit), beta_moments(unit))
    fixed_evals = {
        "sl": _beta_pdf(sl_params),
        "beta_an": _beta_pdf(beta_from_moments(mom_an)),
    }

    records: list[RunRecord] = []
    meta = {"redraws": 0, "operand_rejections": 0, "rep_bias_gate_violations": 0}
    budget = max(1, math.ceil(0.1 * cfg.n_reps))
    for rep in range(cfg.n_reps):
        rng = cfg.seed.generator(_LIMIT, 0, rep)

        def body():
            batch = push_product_samples(
                sample_beta(unit, cfg.n_samples, rng), sample_beta(unit, cfg.n_samples, rng)
            )
            model = fit_logit_kde(batch, cfg.eps_clamp)
            evals = dict(fixed_evals)
            evals["beta_mc"] = _beta_pdf(beta_from_moments(estimate_moments(batch)))
            evals["kde"] = lambda z: kde_density(model, z)
            points = rng.uniform(cfg.eps_clamp, 1.0 - cfg.eps_clamp, cfg.m_integration)
            return _distances(evals, limit_case_density(points), points)

        dists, redraws = _redraw_loop(body, budget - meta["redraws"])
        meta["redraws"] += redraws
        for label in LIMIT_LABELS:
            est = dists[label]
            records.append(
                RunRecord(cfg.operator, cfg.start, cfg.n_samples, None, rep, label, est.value, est.stderr)
            )
        if kde_bias_bound(cfg.n_samples) > 0.01 * min(d.value for d in dists.values()):
            meta["rep_bias_gate_violations"] += 1

    stats = aggregate_stats(records)
    gate_ok = kde_bias_bound(cfg.n_samples) <= 0.01 * min(s.mean for s in stats)
    aggregates = [replace(s, rejections=meta["redraws"], bias_gate_ok=gate_ok) for s in stats]
    return records, aggregates, meta


def run_multi_product(cfg: ExperimentConfig):
    """Distance growth when folding the product over L = lo..hi random opinions."""
    cfg.validate()
    if cfg.operator != "product":
        raise ConfigError("the multi-factor protocol is defined for the product operator")
    lo, hi = cfg.l_factors
    records: list[RunRecord] = []
    aggregates: list[AggregateStat] = []
    meta = {"redraws": 0, "operand_rejections": 0, "rep_bias_gate_violations": 0}
    budget = max(1, math.ceil(0.1 * cfg.n_reps))
    for l_index, l_factors in enumerate(range(lo, hi + 1)):
        l_records: list[RunRecord] = []
        redraws_here = 0
        for rep in range(cfg.n_reps):
            rng = cfg.seed.generator(_MULTI, l_index, rep)

            def body():
                ops = [_draw_opinion(rng) for _ in range(l_factors)]
                sl_params = opinion_to_beta(multiply_many(ops))
                operand_params = [opinion_to_beta(o) for o in ops]
                mom_an = beta_moments(operand_params[0])
                batch = sample_beta(operand_params[0], cfg.n_samples, rng)
                for p in operand_params[1:]:
                    mom_an = product_moments_analytic(mom_an, beta_moments(p))
                    batch = push_product_samples(batch, sample_beta(p, cfg.n_samples, rng))
                model = fit_logit_kde(batch, cfg.eps_clamp)
                evals = {
                    "sl": _beta_pdf(sl_params),
                    "beta_an": _beta_pdf(beta_from_moments(mom_an)),
                }
                points = rng.uniform(cfg.eps_clamp, 1.0 - cfg.eps_clamp, cfg.m_integration)
                return _distances(evals, kde_density(model, points), points)

            dists, redraws = _redraw_loop(body, budget - redraws_here)
            redraws_here += redraws
            for label in MULTI_LABELS:
                est = dists[label]
                l_records.append(
                    RunRecord(cfg.operator, cfg.start, cfg.n_samples, l_factors, rep, label, est.value, est.stderr)
                )
            if kde_bias_bound(cfg.n_samples) > 0.01 * min(d.value for d in dists.values()):
                meta["rep_bias_gate_violations"] += 1
        meta["redraws"] += redraws_here
        stats = aggregate_stats(l_records)
        gate_ok = kde_bias_bound(cfg.n_samples) <= 0.01 * min(s.mean for s in stats)
        aggregates.extend(
            replace(s, rejections=redraws_here, bias_gate_ok=gate_ok) for s in stats
        )
        records.extend(l_records)
    return records, aggregates, meta


def run_qualitative(cfg: ExperimentConfig) -> DensityTable:
    """Evaluate every approximant and the KDE on an even grid for plotting.

    Operands come from ``cfg.operands`` when given, otherwise they are
    sampled the same way the quantitative opinion-start protocol samples
    them.  Errors propagate with the operands attached to the message.
    """
    cfg.validate()
    rng = cfg.seed.generator(_QUALITATIVE, 0, 0)
    if cfg.operands is not None:
        ox, oy = cfg.operands
    elif cfg.operator == "fusion":
        ox, oy = _draw_same_prior_opinions(rng)
    else:
        ox, oy = _draw_opinion(rng), _draw_opinion(rng)

    try:
        if cfg.operator == "fusion":
            oz = fuse(ox, oy)
        else:
            oz = multiply(ox, oy)
        sl_params = opinion_to_beta(oz)
        px, py = opinion_to_beta(ox), opinion_to_beta(oy)
        bx = sample_beta(px, cfg.n_samples, rng)
        by = sample_beta(py, cfg.n_samples, rng)
        if cfg.operator == "fusion":
            redraw = lambda k: (sample_beta(px, k, rng).values, sample_beta(py, k, rng).values)
            batch = push_fusion_samples(bx, by, redraw=redraw)
        else:
            batch = push_product_samples(bx, by)
        model = fit_logit_kde(batch, cfg.eps_clamp)
        mom_mc = estimate_moments(batch)
        grid = np.linspace(cfg.eps_clamp, 1.0 - cfg.eps_clamp, cfg.m_integration)
        columns: dict[str, np.ndarray | None] = {
            "kde": kde_density(model, grid),
            "sl": beta_density(sl_params, grid),
            "gauss_mc": gaussian_density(gaussian_from_moments(mom_mc), grid),
            "beta_mc": beta_density(beta_from_moments(mom_mc), grid),
            "gauss_an": None,
            "beta_an": None,
        }
        if cfg.operator == "product":
            mom_an = product_moments_analytic(beta_moments(px), beta_moments(py))
            columns["gauss_an"] = gaussian_density(gaussian_from_moments(mom_an), grid)
            columns["beta_an"] = beta_density(beta_from_moments(mom_an), grid)
    except ValueError as exc:
        raise type(exc)(f"{exc} [operands: {ox}, {oy}]") from exc

    meta = {"operands": [vars(ox), vars(oy)], "operator": cfg.operator, "n_samples": cfg.n_samples}
    return DensityTable(grid, columns, meta)
