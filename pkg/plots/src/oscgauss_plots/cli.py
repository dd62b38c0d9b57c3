"""make_figures command: regenerate fig1..fig7 from a directory of CSVs."""
from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_INPUTS, FigureSpec, SchemaMismatchError, make_figure


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="make_figures", description=__doc__)
    parser.add_argument("--in", dest="in_dir", required=True, help="directory of input CSVs")
    parser.add_argument("--out", dest="out_dir", required=True, help="directory for images")
    parser.add_argument(
        "--only", action="append", choices=sorted(FIGURE_INPUTS),
        help="build only these figures (repeatable); default all",
    )
    args = parser.parse_args(argv)

    targets = args.only if args.only else sorted(FIGURE_INPUTS)
    failures = 0
    for fid in targets:
        spec = FigureSpec.default(fid, args.in_dir, args.out_dir)
        try:
            path = make_figure(spec)
            print(f"{fid}: wrote {path}")
        except FileNotFoundError as exc:
            print(f"{fid}: missing input ({exc.filename})", file=sys.stderr)
            failures += 1
        except SchemaMismatchError as exc:
            print(f"{fid}: {exc}", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
