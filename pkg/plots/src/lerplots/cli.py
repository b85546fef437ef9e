"""Command line front end: CSVs in, one figure out."""

from __future__ import annotations

import argparse
import sys

from .plotting import PlotSpec, render

DEFAULT_ZOOM = "0.10:0.11"


def _parse_interval(text, flag):
    parts = text.split(":")
    if len(parts) != 2:
        raise SystemExit(f"{flag} expects LO:HI, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise SystemExit(f"{flag} expects numbers, got {text!r}") from None
    return lo, hi


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lerplots",
        description="Plot failure-rate curves from simulation result CSVs, "
                    "one curve per distinct code.")
    ap.add_argument("inputs", nargs="+", metavar="CSV",
                    help="result files in the qdistill CSV format")
    ap.add_argument("--out", required=True,
                    help="output image path (.svg for deterministic output, "
                         ".png/.pdf also accepted)")
    ap.add_argument("--zoom", nargs="?", const=DEFAULT_ZOOM, default=None,
                    metavar="LO:HI",
                    help="add a zoom panel restricted to this x interval "
                         f"(bare --zoom means {DEFAULT_ZOOM})")
    ap.add_argument("--yscale", choices=["log", "linear"], default="log")
    ap.add_argument("--xrange", metavar="LO:HI", default=None,
                    help="x limits for the main panel")
    ap.add_argument("--group", default="code_name",
                    help="column that splits rows into curves "
                         "(default: code_name)")
    ap.add_argument("--title", default=None)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        inputs=args.inputs,
        out=args.out,
        x_range=_parse_interval(args.xrange, "--xrange") if args.xrange else None,
        y_scale=args.yscale,
        group=args.group,
        zoom=_parse_interval(args.zoom, "--zoom") if args.zoom else None,
        title=args.title,
    )
    try:
        report = render(spec)
    except (ValueError, OSError) as exc:
        raise SystemExit(str(exc))
    curves = ", ".join(f"{n} ({c} pts)" for n, c in report.curves.items())
    print(f"wrote {report.out}: {curves}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
