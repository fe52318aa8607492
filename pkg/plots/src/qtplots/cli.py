"""Command-line figure renderer for qtsim CSV outputs."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qtsim-plot",
        description="render overlay figures from qtsim CSV files")
    ap.add_argument("inputs", nargs="+", help="input CSV files, one curve each")
    ap.add_argument("--out", required=True, help="output image (png/svg/pdf)")
    ap.add_argument("--labels", nargs="*", default=[])
    ap.add_argument("--x-label", default="")
    ap.add_argument("--y-label", default="density")
    ap.add_argument("--title", default="")
    ap.add_argument("--x-column", default=None)
    ap.add_argument("--y-column", default=None)
    ap.add_argument("--force", action="store_true",
                    help="overwrite an existing output file")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(inputs=tuple(args.inputs), output=args.out,
                      labels=tuple(args.labels), x_label=args.x_label,
                      y_label=args.y_label, title=args.title,
                      x_column=args.x_column, y_column=args.y_column,
                      force=args.force)
    try:
        render(spec)
    except (OSError, ValueError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
