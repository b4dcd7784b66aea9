"""Head constants and norm-preservation checks for the unitary map.

Prints the exact head constants of each transformed family member over an
n-grid, then runs the small-sum norm-preservation probes and reports the
certified discrepancy against the combined error tolerance.  Example:

    python scripts/isometry_demo.py --n-grid 10,100,1000 --x-max 1e4
"""

import argparse
import sys

from nblab.arith import build_profile
from nblab.beurling import BeurlingSum, make_family
from nblab.sieve import sieve_mobius_cached
from nblab.uop import apply_u, isometry_check
from fractions import Fraction


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-grid", default="10,100,1000")
    ap.add_argument("--x-max", type=float, default=1e4)
    args = ap.parse_args(argv)

    grid = sorted({int(s) for s in args.n_grid.split(",") if s})
    table, _ = sieve_mobius_cached(max(grid))
    profile = build_profile(table)

    print("family  n      head constant")
    for family in ("sn", "vn", "bn", "fn"):
        for n in grid:
            head = apply_u(make_family(family, n, profile)).head_constant
            print(f"{family:6s}  {n:5d}  {head}")

    probes = [("rho(1/x)", BeurlingSum.make([(Fraction(1), Fraction(1))]))]
    probes += [(f"{fam}_{n}", make_family(fam, n, profile))
               for fam, n in (("sn", 2), ("sn", 3), ("vn", 3), ("bn", 5))]
    print(f"\nnorm preservation, far cutoff {args.x_max:g}")
    print("probe     source      image       |diff|      tolerance  ok")
    ok = True
    for name, f in probes:
        rep = isometry_check(f, x_max=args.x_max)
        ok = ok and rep.satisfied
        print(f"{name:9s} {rep.source.value:.8f}  {rep.image.value:.8f}  "
              f"{rep.discrepancy:.2e}  {rep.tolerance:.2e}  "
              f"{'yes' if rep.satisfied else 'NO'}")
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
