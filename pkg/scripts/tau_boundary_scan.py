"""Scan the symmetric-POVM feasibility boundary for the separable pair family."""

import argparse

from qhide.tauopt import maximize_tau_bias, tau_ppt_region


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--grid", type=int, default=41)
    ap.add_argument("--out", default=None, help="write CSV here instead of stdout")
    args = ap.parse_args()
    opt = maximize_tau_bias(args.n)
    lines = ["p00,p11_max"]
    for p00, p11 in tau_ppt_region(args.n, args.grid):
        lines.append(f"{float(p00)!r},{float(p11)!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    print(f"# peak p00+p11 = {opt.p00_plus_p11!r} after {opt.cut_rounds} cut rounds")


if __name__ == "__main__":
    main()
