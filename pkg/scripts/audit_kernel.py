#!/usr/bin/env python3
"""Print the kernel property audit table for a sweep of orders.

Columns: boundary values, reflection symmetry, diagonal jump defect,
measured supremum vs its closed form 2/(1 + e^{-2 lambda}), and whether the
supremum exceeds the unit constant often quoted for this kernel family.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cfbvp.cli import main as cli_main  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", default="1.05,1.2,1.35,1.5,1.65,1.8,1.95")
    ap.add_argument("--grid", type=int, default=401)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    argv = ["audit", args.orders, "--grid", str(args.grid)]
    if args.out:
        argv += ["--out", args.out]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
