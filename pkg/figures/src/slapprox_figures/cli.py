"""``slapprox-figures render``: harness CSV in, SVG/PNG figure out."""

from __future__ import annotations

import argparse
import json
import sys

from .render import KINDS, FigureSpec, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slapprox-figures",
        description="Render measurement-harness CSV outputs into figures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("render", help="draw one figure from one CSV")
    r.add_argument("--kind", choices=KINDS, required=True)
    r.add_argument("--in", dest="input_path", required=True, help="harness CSV file")
    r.add_argument("--out", dest="output_path", required=True,
                   help="image path; format follows the extension (.svg/.png)")
    r.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    spec = FigureSpec(args.input_path, args.kind, args.output_path, args.title)
    try:
        render(spec)
    except (ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    print(f"wrote {spec.output_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
