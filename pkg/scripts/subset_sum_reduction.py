#!/usr/bin/env python3
"""Round-trip a subset-sum-interval instance through the game reductions.

Builds both reduction games (pure-equilibrium and mixed-equilibrium
flavors), solves them, and checks the solver's verdict against the
brute-force subset-sum oracle.

    python3 scripts/subset_sum_reduction.py --weights 1 2 --p 1 --t 3
"""

import argparse
import sys
import time

from epecnash.algorithms import full_enumeration, pure_enumeration
from epecnash.generators import SubsetSumInterval, gen_mne_hardness, gen_pne_hardness


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--weights", type=int, nargs="+", required=True)
    parser.add_argument("--p", type=int, required=True)
    parser.add_argument("--t", type=int, required=True)
    parser.add_argument("--budget", type=float, default=300.0)
    args = parser.parse_args(argv)

    width = args.t - args.p
    r = width.bit_length() - 1
    inst = SubsetSumInterval(q=tuple(args.weights), p=args.p, t=args.t, r=r)
    expect = inst.decision()
    print(f"oracle: some s in [{args.p}, {args.t}) is NOT a subset sum -> {expect}")

    t0 = time.time()
    rep = pure_enumeration(gen_pne_hardness(inst), budget=args.budget)
    got = rep.status == "PNE"
    print(
        f"pure-equilibrium reduction: {rep.status:14s} "
        f"({'agrees' if got == expect else 'DISAGREES'}, {time.time()-t0:.1f}s)"
    )

    t0 = time.time()
    rep = full_enumeration(gen_mne_hardness(inst), budget=args.budget)
    got_mne = rep.status in ("MNE", "PNE")
    print(
        f"mixed-equilibrium reduction: {rep.status:13s} "
        f"({'agrees' if got_mne == expect else 'DISAGREES'}, {time.time()-t0:.1f}s)"
    )
    return 0 if (got == expect and got_mne == expect) else 1


if __name__ == "__main__":
    sys.exit(main())
