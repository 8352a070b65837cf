"""Command-line front end: render benchmark CSV files into figures."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, PlotError, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plot",
                                description="Render decoder benchmark CSV "
                                            "output into figures")
    p.add_argument("--kind", required=True, choices=KINDS,
                   help="figure type: BLER curves, average pattern counts, "
                        "or pattern-count ratio vs the AI baseline")
    p.add_argument("--csv", required=True, nargs="+", metavar="PATH",
                   help="one or more harness CSV files")
    p.add_argument("--out", required=True, help="output image path (.png/.svg/...)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(csv_paths=tuple(args.csv), kind=args.kind, out_path=args.out)
    try:
        series = render(spec)
    except PlotError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {args.out} ({len(series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
