"""Cheat pass rates versus the number of hashing rounds.

Compares the Monte Carlo pass rate against the exact per-round survival
q^r and the headline 2^-r approximation.
"""

import argparse

from qhide.commitment import CheatModel, round_pass_closed_form, run_sessions


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--r-max", type=int, default=8)
    ap.add_argument("--sessions", type=int, default=100000)
    ap.add_argument("--seed", type=int, default=1905)
    ap.add_argument("--cheat", default="parity", help="honest | parity | nonsinglet:ALPHA")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    cheat = CheatModel.parse(args.cheat)
    print("r  pass_rate  exact_q^r  2^-r")
    for r in range(1, args.r_max + 1):
        stats = run_sessions(args.n, r, 0, cheat, args.sessions, args.seed, threads=args.threads)
        q = float(round_pass_closed_form(args.n + r))
        print(f"{r}  {stats.pass_rate:.6f}   {q**r:.6f}   {2.0**-r:.6f}")


if __name__ == "__main__":
    main()
