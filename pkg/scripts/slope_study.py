"""Fit convergence exponents over seeded random targets for several (n, k).

    python3 scripts/slope_study.py --pairs 3:1,4:2,5:1 --seeds 10
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

import numpy as np

from latproj.approximation import convergence_sweep, expected_slope
from latproj.instances import random_target
from latproj.lattice import Lattice


@dataclass
class SlopeStudyConfig:
    pairs: list = field(default_factory=lambda: [(3, 1), (4, 2)])
    seeds: int = 10
    w_list: list = field(default_factory=lambda: [10, 100, 1000, 10000])
    base_seed: int = 0


def run(cfg):
    rows = []
    for n, k in cfg.pairs:
        slopes = []
        for s in range(cfg.seeds):
            rng = np.random.default_rng(cfg.base_seed + 1000 * n + s)
            sw = convergence_sweep(Lattice(np.eye(n)), random_target(rng, n - k), k, cfg.w_list)
            slopes.append(sw.slope)
        rows.append({"n": n, "k": k, "expected": expected_slope(n, k),
                     "median": float(np.median(slopes)), "min": min(slopes),
                     "max": max(slopes)})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", default="3:1,4:2", help="comma list of n:k")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--w-list", default="10,100,1000,10000")
    ap.add_argument("--base-seed", type=int, default=0)
    a = ap.parse_args(argv)
    cfg = SlopeStudyConfig(
        pairs=[tuple(int(x) for x in p.split(":")) for p in a.pairs.split(",")],
        seeds=a.seeds, w_list=[int(w) for w in a.w_list.split(",")], base_seed=a.base_seed)
    out = csv.DictWriter(sys.stdout, fieldnames=["n", "k", "expected", "median", "min", "max"])
    out.writeheader()
    for row in run(cfg):
        out.writerow({key: (f"{v:.4f}" if isinstance(v, float) else v) for key, v in row.items()})


if __name__ == "__main__":
    main()
