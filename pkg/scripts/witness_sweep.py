"""Run every lower-bound witness over a shared n-grid.

Emits one CSV per witness family (anchor,family,n,p,lhs_low,lhs_high,rhs,
satisfied,margin) and exits nonzero if any theorem-backed witness fails.
Example:

    python scripts/witness_sweep.py --n-grid 10,100,1000 --out-dir results/
"""

import argparse
import os
import sys

from nblab.cli import main as nblab_main


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-grid", default="10,31,100,316,1000")
    ap.add_argument("--epsilon", default="1e-6")
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args(argv)

    os.makedirs(args.out_dir, exist_ok=True)
    worst = 0
    for family, p in (("sn", "2"), ("sn", "1.5"), ("gn", "2"), ("rn", "2")):
        out = os.path.join(args.out_dir, f"witness_{family}_p{p}.csv")
        code = nblab_main([
            "witness", "--family", family, "--p", p,
            "--n-grid", args.n_grid, "--epsilon", args.epsilon,
            "--out", out,
        ])
        print(f"{family} p={p}: wrote {out} (exit {code})")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
