"""Command line wrapper: render --kind KIND --in FILE [--in FILE2] --out FILE.png"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .render import FIGURE_KINDS, FigureSpec, MissingColumnError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render figures from pawpcn sweep CSV files")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        metavar="FILE", help="input CSV; repeat to pass the "
                        "results.csv metadata next to a trace.csv")
    parser.add_argument("--out", required=True, metavar="FILE.png")
    parser.add_argument("--group-by", default="protocol,algo",
                        help="comma-separated series keys (default protocol,algo)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    keys = tuple(k for k in args.group_by.split(",") if k)
    try:
        spec = FigureSpec(kind=args.kind, inputs=tuple(args.inputs),
                          output=args.out, group_keys=keys)
        result = render(spec)
    except (MissingColumnError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for s in result.series:
        print(f"{s.label}: {s.n_seeds} seeds, peak {s.peak_y:.4f} "
              f"at x={s.peak_x:g}")
    print(f"wrote {result.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
