"""Command line: sweepfigs render --csv PATH --kind KIND --x COL [--y COL ...] --z COL --out PATH."""

from __future__ import annotations

import argparse
import sys

from .csvdata import InputError, RecipeError
from .render import KINDS, FigureRecipe, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sweepfigs", description="Render sweep CSVs into figures.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure from a sweep CSV")
    p.add_argument("--csv", required=True, help="input sweep CSV")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--x", required=True, help="x-axis column")
    p.add_argument("--y", action="append", default=[],
                   help="y column; repeat for several curves")
    p.add_argument("--z", default=None, help="cell-value column (heatmap/classmap)")
    p.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    recipe = FigureRecipe(csv_path=args.csv, kind=args.kind, x=args.x,
                          y=list(args.y), z=args.z, out_path=args.out)
    if recipe.kind == "classmap" and recipe.z is None:
        recipe.z = "class"
    try:
        result = render(recipe)
    except RecipeError as exc:
        print(f"recipe error: {exc}", file=sys.stderr)
        return 2
    except (InputError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    print(result.out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
