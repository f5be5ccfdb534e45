"""Closed-form B3 distance against the grid+polish oracle on random targets.

    python scripts/oracle_agreement.py --samples 1000 --grid-step 0.01
"""

import argparse
import time
from collections import defaultdict

import numpy as np

from fidapprox.fidelity_solver import solve
from fidapprox.oracle import OracleConfig, oracle_solve
from fidapprox.sampling import ball


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--grid-step", type=float, default=0.01)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = OracleConfig(grid_step=args.grid_step)
    pts = ball(np.random.default_rng(args.seed), args.samples) * (1.0 - 1e-15)
    gaps = defaultdict(list)
    t0 = time.perf_counter()
    for p in pts:
        res = solve(p)
        gaps[res.label].append(abs(res.distance - oracle_solve(p, cfg=cfg).distance))
    secs = time.perf_counter() - t0

    print("region,count,max_gap,mean_gap")
    for label in sorted(gaps):
        g = np.array(gaps[label])
        print(f"{label},{len(g)},{g.max():.3e},{g.mean():.3e}")
    print(f"# {args.samples} targets in {secs:.1f} s")


if __name__ == "__main__":
    main()
