"""Mixing of the lazy generator walk toward the uniform group distribution.

Prints the exact L1 distance to uniform on a doubling ladder of step counts,
then the certified (deliberately conservative) policy step count for the
requested accuracy, so the two can be compared directly.
"""

import argparse

import numpy as np

from qhide.clifford import group_order, walk_distribution, walk_length_policy


def l1_to_uniform(n: int, steps: int) -> float:
    p = walk_distribution(n, steps)
    return float(np.abs(p - 1.0 / p.size).sum())


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1, choices=(1, 2))
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--max-steps", type=int, default=4096)
    args = ap.parse_args()
    print(f"projective group size: {group_order(args.n) // 8}")
    steps = 1
    while steps <= args.max_steps:
        print(f"steps {steps:6d}  L1 {l1_to_uniform(args.n, steps):.3e}")
        steps *= 2
    policy = walk_length_policy(args.n, args.epsilon)
    print(f"certified policy for epsilon={args.epsilon}: {policy} steps")


if __name__ == "__main__":
    main()
