"""Median exact/asymptotic distance ratio per degree and the constant that centres it.

Usage: python scripts/calibrate_distance.py [--degrees 10,20,40] [--samples 100]
"""

import argparse
from math import comb, pi, sqrt

from rarefaction_lab.experiments import ExperimentConfig, calibrate_grad_scale, run


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--degrees", default="10,20,40")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    degrees = tuple(int(d) for d in args.degrees.split(","))
    cfg = ExperimentConfig(kind="distance_stats", n=args.n, degrees=degrees,
                           samples_per_degree=args.samples, master_seed=args.seed)
    rec = run(cfg)
    print(f"{'d':>4} {'median':>10} {'iqr':>10} {'closed form':>12} {'constant':>10}")
    for row in rec.rows:
        d = row["degree"]
        # with the Kostlan Gram matrix the ratio does not depend on the sample
        closed = sqrt(d**args.n / (pi**args.n * comb(args.n + d, args.n)))
        const = rec.extras["effective_constant"][str(d)]
        print(f"{d:4d} {row['median']:10.6f} {row['iqr']:10.2e} {closed:12.6f} {const:10.6f}")
    cal = calibrate_grad_scale(cfg)
    print(f"grad_scale sweep at d={cal['degree']}: {cal['medians']}")


if __name__ == "__main__":
    main()
