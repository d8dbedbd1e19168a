"""Run the standard campaigns at acceptance scale and chart them.

Usage: python scripts/run_campaigns.py OUT_DIR [--threads K] [--only kind ...]
Each campaign lands in OUT_DIR/<name>/ with a JSON record, a manifest and a chart.
"""

import argparse
import sys
from pathlib import Path

from rarefaction_lab.cli import main as cli

CAMPAIGNS = {
    "rarefaction_binary": ("rarefaction", ["--n", "1", "--degree", "3,5,7", "--samples", "10000",
                                           "--threshold", "0.5,1.0"]),
    "rarefaction_curves": ("rarefaction", ["--n", "2", "--degree", "3,4,5,6,7,8",
                                           "--samples", "200", "--threshold", "0.25,0.5"]),
    "c1_decay": ("c1_decay", ["--n", "1", "--ell", "1", "--degree", "8,12,16,20",
                              "--samples", "200"]),
    "approximation": ("approximation", ["--n", "1", "--ell", "1", "--degree", "8,16,20",
                                        "--samples", "500"]),
    "tube_volume": ("tube_volume", ["--n", "1", "--degree", "6", "--samples", "2000",
                                    "--radii", "1e-4,1e-3,1e-2"]),
    "distance_stats": ("distance_stats", ["--n", "1", "--degree", "10,20,40", "--samples", "100"]),
}


def parse_args(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("out", type=Path)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", nargs="*", choices=sorted(CAMPAIGNS))
    return p.parse_args(argv)


def run_one(name, out: Path, threads: int, seed: int) -> int:
    kind, args = CAMPAIGNS[name]
    target = out / name
    code = cli(["experiment", kind, *args, "--seed", str(seed), "--threads", str(threads),
                "--format", "json", "--out", str(target)])
    if code not in (0, 3):
        return code
    cli(["chart", str(target / f"{kind}.json"), "--out", str(target)])
    print(f"{name}: exit {code}, outputs in {target}")
    return code


def main(argv=None) -> int:
    args = parse_args(argv)
    worst = 0
    for name in args.only or CAMPAIGNS:
        worst = max(worst, run_one(name, args.out, args.threads, args.seed))
    return worst


if __name__ == "__main__":
    sys.exit(main())
