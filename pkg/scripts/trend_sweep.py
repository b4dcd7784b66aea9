"""Sweep certified L_p distances over an n-grid for every family.

Writes one CSV per family (family,n,p,value,err,tail_low,tail_high,
segments,seconds) plus a gnuplot script per sweep.  Example:

    python scripts/trend_sweep.py --n-grid 10,31,100,316,1000 \
        --epsilon 1e-6 --out-dir results/
"""

import argparse
import os
import sys

from nblab.cli import main as nblab_main
from nblab.witnesses import ALL_FAMILIES


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-grid", default="10,31,100,316,1000")
    ap.add_argument("--epsilon", default="1e-6")
    ap.add_argument("--p", default=None,
                    help="norm exponent (default: 1 for convergent families, "
                         "2 for the divergent ones)")
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--families", default=",".join(ALL_FAMILIES))
    args = ap.parse_args(argv)

    os.makedirs(args.out_dir, exist_ok=True)
    worst = 0
    for family in args.families.split(","):
        p = args.p if args.p is not None else \
            ("2" if family in ("sn", "rn") else "1")
        out = os.path.join(args.out_dir, f"trend_{family}_p{p}.csv")
        code = nblab_main([
            "norm", "--family", family, "--p", p,
            "--n-grid", args.n_grid, "--epsilon", args.epsilon,
            "--out", out, "--plot-script", out.replace(".csv", ".gp"),
        ])
        print(f"{family}: wrote {out} (exit {code})")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
