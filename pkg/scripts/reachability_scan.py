#!/usr/bin/env python
"""Reachability of the constructed Ry layer by simulation, n = 1 .. n_max, next to 1/2^n."""
import argparse

import numpy as np

from vqsearch.circuits import ProblemInstance
from vqsearch.reachability import constructed_reachability


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    print("n,k,reachability,1/2^n,abs_diff")
    for n in range(1, args.n_max + 1):
        k = int(rng.integers(1 << n))
        r = constructed_reachability(ProblemInstance(n, k)).reachability
        print(f"{n},{k},{r:.6e},{2.0**-n:.6e},{abs(r - 2.0**-n):.1e}")


if __name__ == "__main__":
    main()
