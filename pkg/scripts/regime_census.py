"""Count comparison regimes over the octant and the sign of g_trace - g_fidelity.

    python scripts/regime_census.py --samples 100000
"""

import argparse
from collections import Counter

import numpy as np

from fidapprox.comparison import compare
from fidapprox.sampling import octant_ball


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    regimes, order = Counter(), Counter()
    worst = np.inf
    for p in octant_ball(np.random.default_rng(args.seed), args.samples):
        rep = compare(p)
        regimes[rep.regime] += 1
        d = rep.g_trace - rep.g_fidelity
        worst = min(worst, d)
        order[(rep.regime, "fidelity<=trace" if d >= -1e-12 else "trace<fidelity")] += 1

    print("regime,count")
    for k, v in sorted(regimes.items()):
        print(f"{k},{v}")
    print("regime,ordering,count")
    for (k, o), v in sorted(order.items()):
        print(f"{k},{o},{v}")
    print(f"# min g_trace - g_fidelity: {worst:.3e}")


if __name__ == "__main__":
    main()
