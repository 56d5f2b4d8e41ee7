"""Standalone figure-rendering command.

Usage:
    plotkit fig3 --csv fig3.order-1.csv --csv fig3.order-2.csv --out fig3
    plotkit fig7 --csv fig7.csv --out fig7 --title "noisy ensemble"
    plotkit timeseries --csv run.csv --column purity --out purity
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

from .figures import BUILDERS, FigureSpec, render
from .io import EmptyCSVError, MissingColumnError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render simulation CSV output as PNG and SVG figures.")
    parser.add_argument("figure", choices=sorted(BUILDERS),
                        help="figure layout id")
    parser.add_argument("--csv", action="append", required=True,
                        metavar="PATH", help="input CSV (repeatable)")
    parser.add_argument("--out", required=True,
                        help="output stem; .png and .svg are written")
    parser.add_argument("--title")
    parser.add_argument("--column", help="column name for the generic layout")
    parser.add_argument("--rename", action="append", default=[],
                        metavar="LABEL=DISPLAY",
                        help="display name for a series label (repeatable)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    renames = {}
    for item in args.rename:
        if "=" not in item:
            print(f"bad --rename {item!r}: expected LABEL=DISPLAY", file=sys.stderr)
            return 2
        key, value = item.split("=", 1)
        renames[key] = value
    spec = FigureSpec(figure=args.figure, csv_paths=args.csv, output=args.out,
                      title=args.title, series_labels=renames,
                      column=args.column)
    try:
        paths = render(spec)
    except (MissingColumnError, EmptyCSVError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
