#!/usr/bin/env python3
"""Batch-export correlator tables and constant dictionaries.

One file per (order, kind, format) plus one constants file per order, all
driven through the command line front end so the output is byte-identical
to what `gdtau` prints.
"""

import argparse
import sys
from pathlib import Path

try:
    from gdtau.cli import main as gdtau_main
except ImportError:  # running from a checkout without an install
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
    from gdtau.cli import main as gdtau_main

EXTENSION = {"text": "txt", "json": "json", "csv": "csv", "latex": "tex"}


def export_order(outdir: Path, r: int, weight: int, alphabet: str,
                 formats: list[str]) -> int:
    jobs = []
    for fmt in formats:
        for flag, kind in (("--connected", "connected"),
                           ("--disconnected", "disconnected")):
            target = outdir / f"r{r}_w{weight}_{alphabet}_{kind}.{EXTENSION[fmt]}"
            jobs.append((
                ["correlators", "--r", str(r), "--weight", str(weight),
                 "--alphabet", alphabet, flag, "--format", fmt,
                 "--out", str(target)],
                target,
            ))
    constants_file = outdir / f"r{r}_constants.json"
    jobs.append((
        ["constants", "--r", str(r), "--format", "json",
         "--out", str(constants_file)],
        constants_file,
    ))
    for argv, target in jobs:
        code = gdtau_main(argv)
        if code != 0:
            print(f"error: exporting {target.name} exited with {code}",
                  file=sys.stderr)
            return code
        print(f"wrote {target}")
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Export correlator tables and constants for several orders"
    )
    parser.add_argument("--orders", default="2,3,4",
                        help="comma separated hierarchy orders (default 2,3,4)")
    parser.add_argument("--weight", type=int, default=6,
                        help="largest total weight per table (default 6)")
    parser.add_argument("--alphabet", choices=["c", "d", "sigma"], default="c")
    parser.add_argument("--formats", default="text,json",
                        help="comma separated subset of text,json,csv,latex")
    parser.add_argument("--outdir", default="tables",
                        help="directory for the exported files (default tables/)")
    args = parser.parse_args()

    try:
        orders = [int(x) for x in args.orders.split(",")]
    except ValueError:
        parser.error(f"bad --orders {args.orders!r}")
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    unknown = [f for f in formats if f not in EXTENSION]
    if unknown:
        parser.error(f"unknown formats: {', '.join(unknown)}")

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for r in orders:
        code = export_order(outdir, r, args.weight, args.alphabet, formats)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
