"""Command-line entry point: sweep CSVs in, panel figure out."""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, render


def main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="plotkit",
        description="Render acceptance-ratio sweep CSVs as a panel figure.")
    p.add_argument("--csv", nargs="+", required=True,
                   help="sweep result CSV files, one panel each")
    p.add_argument("--panel-by", dest="panel_by",
                   help="comma-separated panel titles, matching --csv order")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--dpi", type=int, default=150)
    p.add_argument("--ncols", type=int, default=2)
    args = p.parse_args(argv)

    titles = tuple(t.strip() for t in args.panel_by.split(",")) if args.panel_by else ()
    try:
        spec = PlotSpec(csv_paths=tuple(args.csv), out_path=args.out,
                        panel_titles=titles, dpi=args.dpi, ncols=args.ncols)
        render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
