"""CSV/JSON emission for the harness.

Schemas are fixed so downstream tooling can rely on them:

* density table:  ``z,kde,sl,gauss_mc,beta_mc,gauss_an,beta_an``
* records:        ``operator,start,n_samples,l_factors,rep,approximant,distance,stderr``
* aggregates:     ``operator,start,n_samples,l_factors,approximant,mean,std,reps,rejections,bias_gate_ok``

Floats in the density table carry 9 significant digits; records and
aggregates use the shortest round-trip representation.  Output is a pure
function of the run results, so identical configurations emit byte-identical
files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from pathlib import Path

from .runner import AggregateStat, DensityTable, RunRecord

DENSITY_HEADER = ("z", "kde", "sl", "gauss_mc", "beta_mc", "gauss_an", "beta_an")
RECORDS_HEADER = (
    "operator", "start", "n_samples", "l_factors", "rep", "approximant", "distance", "stderr",
)
AGGREGATES_HEADER = (
    "operator", "start", "n_samples", "l_factors", "approximant",
    "mean", "std", "reps", "rejections", "bias_gate_ok",
)


def aggregates_path(records_path) -> Path:
    p = Path(records_path)
    return p.with_name(p.stem + ".aggregates" + (p.suffix or ".csv"))


def meta_path(out_path) -> Path:
    p = Path(out_path)
    return p.with_name(p.stem + ".meta.json")


def _fmt(value: float) -> str:
    return repr(float(value))


def _record_row(r: RunRecord) -> list[str]:
    return [
        r.operator, r.start, str(r.n_samples),
        "" if r.l_factors is None else str(r.l_factors),
        str(r.rep), r.approximant, _fmt(r.distance), _fmt(r.stderr),
    ]


def _aggregate_row(a: AggregateStat) -> list[str]:
    return [
        a.operator, a.start, str(a.n_samples),
        "" if a.l_factors is None else str(a.l_factors),
        a.approximant, _fmt(a.mean), _fmt(a.std), str(a.reps), str(a.rejections),
        "true" if a.bias_gate_ok else "false",
    ]


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_density_csv(path, table: DensityTable) -> None:
    rows = []
    for i, z in enumerate(table.z):
        row = [f"{z:.9g}"]
        for name in DENSITY_HEADER[1:]:
            col = table.columns[name]
            row.append("" if col is None else f"{col[i]:.9g}")
        rows.append(row)
    _write_csv(path, DENSITY_HEADER, rows)


def write_records_csv(path, records: list[RunRecord]) -> None:
    _write_csv(path, RECORDS_HEADER, [_record_row(r) for r in records])


def write_aggregates_csv(path, aggregates: list[AggregateStat]) -> None:
    _write_csv(path, AGGREGATES_HEADER, [_aggregate_row(a) for a in aggregates])


def write_meta_json(path, meta: dict) -> None:
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_run_json(path, records, aggregates, meta) -> None:
    payload = {
        "records": [asdict(r) for r in records],
        "aggregates": [asdict(a) for a in aggregates],
        "meta": meta,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_density_json(path, table: DensityTable, meta: dict) -> None:
    payload = {
        "z": [float(v) for v in table.z],
        "columns": {
            name: None if col is None else [float(v) for v in col]
            for name, col in table.columns.items()
        },
        "meta": meta,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
