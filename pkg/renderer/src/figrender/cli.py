"""Command-line entry point for batch figure rendering."""

import argparse
import sys
from pathlib import Path

import pandas as pd

from .errors import RenderError, SpecError
from .render import render
from .spec import FIGURE_KINDS, FigureSpec, load_spec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render static figures from spectral-efficiency sweep CSVs.")
    parser.add_argument("--spec", help="JSON figure spec to render")
    parser.add_argument("--all", action="store_true",
                        help="render every sweep CSV found in --in")
    parser.add_argument("--in", dest="in_dir",
                        help="input directory scanned with --all")
    parser.add_argument("--out", dest="out_dir",
                        help="output directory used with --all")
    parser.add_argument("--format", choices=("png", "svg"), default="png",
                        help="image format for --all (default: png)")
    return parser


def _kind_of(csv_path: Path):
    """Figure kind of a sweep CSV, from its experiment column."""
    try:
        head = pd.read_csv(csv_path, nrows=1)
    except Exception:
        return None
    if "experiment" not in head.columns or head.empty:
        return None
    kind = str(head["experiment"].iloc[0])
    return kind if kind in FIGURE_KINDS else None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if bool(args.spec) == bool(args.all):
        print("error: use exactly one of --spec or --all", file=sys.stderr)
        return 2
    try:
        if args.spec:
            out, _ = render(load_spec(args.spec))
            print(f"wrote {out}")
            return 0
        if not args.in_dir or not args.out_dir:
            print("error: --all requires --in and --out", file=sys.stderr)
            return 2
        rendered = 0
        for csv_path in sorted(Path(args.in_dir).glob("*.csv")):
            kind = _kind_of(csv_path)
            if kind is None:
                print(f"skipping {csv_path} (not a sweep CSV)")
                continue
            output = Path(args.out_dir) / f"{csv_path.stem}.{args.format}"
            out, _ = render(FigureSpec(inputs=(str(csv_path),), kind=kind,
                                       output=str(output),
                                       image_format=args.format))
            print(f"wrote {out}")
            rendered += 1
        if rendered == 0:
            print("error: no sweep CSVs found", file=sys.stderr)
            return 1
        return 0
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
