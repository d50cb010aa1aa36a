"""Command-line entry point: `plots <kind> --csv PATH --out PATH`."""

from __future__ import annotations

import argparse
import sys

from .figures import SchemaError, plot_conservation, plot_convergence, plot_timing

_KINDS = {
    "convergence": plot_convergence,
    "conservation": plot_conservation,
    "timing": plot_timing,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render benchmark CSVs as figures (raster + vector)",
    )
    parser.add_argument("kind", choices=sorted(_KINDS))
    parser.add_argument("--csv", required=True, help="benchmark CSV path")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        summary = _KINDS[args.kind](args.csv, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in summary["outputs"]:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
