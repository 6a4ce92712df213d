"""Command-line harness: qualitative, quantitative, limit-case, multi-product.

Each subcommand writes CSV (records plus a ``*.aggregates.csv`` and a
``*.meta.json`` sidecar) or a single JSON document, and exits non-zero with
one machine-readable error line on stderr when a run cannot complete.
"""

from __future__ import annotations

import argparse
import json
import sys

from ..errors import ConfigError, ExperimentError
from ..opinions import BinomialOpinion
from ..sampling import RngSeed
from .config import ExperimentConfig
from .io import (
    aggregates_path,
    meta_path,
    write_aggregates_csv,
    write_density_csv,
    write_density_json,
    write_meta_json,
    write_records_csv,
    write_run_json,
)
from .runner import run_limit_case, run_multi_product, run_qualitative, run_quantitative


def _parse_samples(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(float(part)) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"cannot parse sample counts from {text!r}") from None
    if not values:
        raise ConfigError("empty sample count")
    return values


def _parse_factors(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return int(lo), int(hi)
        value = int(text)
        return value, value
    except ValueError:
        raise ConfigError(f"cannot parse factor range from {text!r}") from None


def _parse_operands(text: str) -> tuple[BinomialOpinion, BinomialOpinion]:
    try:
        parts = text.split(";")
        ops = tuple(BinomialOpinion(*(float(v) for v in part.split(","))) for part in parts)
    except (ValueError, TypeError):
        raise ConfigError(f"cannot parse operands from {text!r}") from None
    if len(ops) != 2:
        raise ConfigError("expected exactly two operands separated by ';'")
    return ops


def _add_common(parser: argparse.ArgumentParser, default_samples: str) -> None:
    parser.add_argument("--operator", choices=("product", "fusion"), default="product")
    parser.add_argument("--start", choices=("opinion", "pdf"), default="opinion")
    parser.add_argument("--samples", default=default_samples,
                        help="MC sample count; a comma list sets the quantitative ladder")
    parser.add_argument("--reps", type=int, default=100)
    parser.add_argument("--grid", type=int, default=1000,
                        help="integration points / density grid size")
    parser.add_argument("--factors", default="2..5", help="factor range Lmin..Lmax")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--eps", type=float, default=1e-9)
    parser.add_argument("--out", required=True, help="output file path")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slapprox",
        description="Measure how closely opinion-algebra operators track Monte Carlo ground truth.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    q = sub.add_parser("qualitative", help="density table for one operand pair")
    _add_common(q, "100000")
    q.add_argument("--operands", default=None,
                   help="fixed operands 'b,d,u,a;b,d,u,a' (sampled when omitted)")
    _add_common(sub.add_parser("quantitative", help="distance statistics across the sample ladder"),
                "1000,10000,100000")
    _add_common(sub.add_parser("limit-case", help="distances against the exact -ln z density"),
                "1000000")
    _add_common(sub.add_parser("multi-product", help="distance growth over 2..5 product factors"),
                "100000")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    samples = _parse_samples(args.samples)
    if args.command != "quantitative" and len(samples) != 1:
        raise ConfigError(f"{args.command} takes a single sample count, got {args.samples!r}")
    operands = None
    if getattr(args, "operands", None):
        operands = _parse_operands(args.operands)
    return ExperimentConfig(
        operator=args.operator,
        start=args.start,
        n_samples=samples[0],
        n_reps=args.reps,
        m_integration=args.grid,
        l_factors=_parse_factors(args.factors),
        seed=RngSeed(args.seed),
        output_path=args.out,
        eps_clamp=args.eps,
        out_format=args.format,
        n_ladder=samples if args.command == "quantitative" else None,
        operands=operands,
    )


def _emit_run(cfg: ExperimentConfig, records, aggregates, meta) -> None:
    meta = {"config": _config_meta(cfg), **meta,
            "std_semantics": "std is the sample standard deviation across repetitions"}
    if cfg.out_format == "json":
        write_run_json(cfg.output_path, records, aggregates, meta)
        return
    write_records_csv(cfg.output_path, records)
    write_aggregates_csv(aggregates_path(cfg.output_path), aggregates)
    write_meta_json(meta_path(cfg.output_path), meta)


def _config_meta(cfg: ExperimentConfig) -> dict:
    return {
        "operator": cfg.operator,
        "start": cfg.start,
        "n_samples": cfg.n_samples,
        "n_ladder": list(cfg.ladder) if cfg.n_ladder is not None else None,
        "n_reps": cfg.n_reps,
        "m_integration": cfg.m_integration,
        "l_factors": list(cfg.l_factors),
        "seed": {"seed": cfg.seed.seed, "stream": cfg.seed.stream},
        "eps_clamp": cfg.eps_clamp,
        "operands": None if cfg.operands is None else [vars(o) for o in cfg.operands],
    }


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if args.command == "qualitative":
            table = run_qualitative(cfg)
            meta = {"config": _config_meta(cfg), **table.meta}
            if cfg.out_format == "json":
                write_density_json(cfg.output_path, table, meta)
            else:
                write_density_csv(cfg.output_path, table)
                write_meta_json(meta_path(cfg.output_path), meta)
        elif args.command == "quantitative":
            _emit_run(cfg, *run_quantitative(cfg))
        elif args.command == "limit-case":
            _emit_run(cfg, *run_limit_case(cfg))
        else:
            _emit_run(cfg, *run_multi_product(cfg))
    except (ConfigError, ExperimentError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    print(f"wrote {cfg.output_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
