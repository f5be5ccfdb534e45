"""Monte Carlo relative CR volumes against the exact values, over sample sizes.

    python scripts/volume_study.py --seeds 5
"""

import argparse

from fidapprox.cr_geometry import EXACT_VOLUME, relative_volume


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()

    print("set,samples,seed,estimate,stderr,exact,z")
    for sid, exact in EXACT_VOLUME.items():
        for n in args.sizes:
            for seed in range(args.seeds):
                v, err = relative_volume(sid, "montecarlo", n, seed=seed)
                print(f"{sid},{n},{seed},{v:.6f},{err:.2e},{exact:.6f},{(v - exact) / err:+.2f}")


if __name__ == "__main__":
    main()
