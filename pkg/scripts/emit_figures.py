"""Regenerate every figure dataset under an output directory."""

import argparse

from qhide.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures", help="output directory")
    ap.add_argument("--grid", type=int, default=101)
    ap.add_argument("--full", action="store_true", help="include the slow multi-pair rows")
    args = ap.parse_args()
    argv = ["figures", "--out", args.out, "--grid", str(args.grid)]
    if args.full:
        argv.append("--full")
    raise SystemExit(cli_main(argv))


if __name__ == "__main__":
    main()
