"""Fidelity and trace region labels on a planar slice, as a CSV grid.

    python scripts/region_map.py --ry 0.1 --resolution 101 > slice.csv
"""

import argparse

import numpy as np

from fidapprox.fidelity_solver import solve
from fidapprox.trace_solver import solve_trace


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ry", type=float, default=0.1, help="fixed y coordinate")
    ap.add_argument("--resolution", type=int, default=51)
    args = ap.parse_args()

    print("x,z,fidelity_region,trace_region,fidelity_distance,trace_distance")
    for x in np.linspace(0.0, 1.0, args.resolution):
        for z in np.linspace(0.0, 1.0, args.resolution):
            r = (x, args.ry, z)
            if x * x + args.ry ** 2 + z * z > 1.0:
                continue
            f, t = solve(r), solve_trace(r)
            print(f"{x:.6f},{z:.6f},{f.label},{t.label},{f.distance:.10f},{t.distance:.10f}")


if __name__ == "__main__":
    main()
