"""Center density of the constructed projections against their targets.

    python3 scripts/density_table.py --w-list 10,100,1000
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

from latproj.approximation import approximate
from latproj.formats import builtin_lattice
from latproj.svp_density import center_density, density_gap


@dataclass
class DensityConfig:
    cases: list = field(default_factory=lambda: [
        ("Zn:3", "hex", 1), ("Zn:4", "An*:3", 1), ("Zn:4", "hex", 2), ("Dn:4", "An*:2", 2),
    ])
    w_list: list = field(default_factory=lambda: [10, 100, 1000])


def run(cfg):
    rows = []
    for src, tgt, k in cfg.cases:
        L1, L2 = builtin_lattice(src), builtin_lattice(tgt)
        for w in cfg.w_list:
            r = approximate(L1, L2, k, w)
            P = r.projected_lattice()
            rows.append({"source": src, "target": tgt, "k": k, "w": w,
                         "density": center_density(P), "target_density": center_density(L2),
                         "gap": density_gap(P, L2), "V_maxnorm": r.V_norm})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--w-list", default="10,100,1000")
    a = ap.parse_args(argv)
    cfg = DensityConfig(w_list=[int(w) for w in a.w_list.split(",")])
    rows = run(cfg)
    out = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    out.writeheader()
    for row in rows:
        out.writerow({key: (f"{v:.6e}" if isinstance(v, float) else v) for key, v in row.items()})


if __name__ == "__main__":
    main()
