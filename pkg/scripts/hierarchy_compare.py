"""
Tabulate relaxation optima across the circulant cover family.

For each n the plain LP sits at n/(n-1), monomial-multiplier hierarchies
barely move no matter the degree, and the pitch-2 family snaps to the
integer optimum 2.  Useful as a quick sanity sweep after touching the LP
or spanning-set code.
"""
import argparse
import time
from fractions import Fraction

from pitchforge.instances import feasible_masks, gen_full_circulant
from pitchforge.ratio import format_fraction
from pitchforge.relax import build_sa_lp, build_standard_sa, optimize
from pitchforge.spanning import build_spanning_set


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmin", type=int, default=3)
    ap.add_argument("--nmax", type=int, default=7)
    ap.add_argument("--degrees", default="0,1,2", help="monomial degrees to solve")
    ap.add_argument("--pi", type=int, default=2, help="pitch level for the spanning family")
    args = ap.parse_args()
    degrees = [int(p) for p in args.degrees.split(",")]

    cols = [f"deg-{d}" for d in degrees] + [f"pitch-{args.pi}", "hull", "time"]
    print("n     " + "".join(c.ljust(10) for c in cols))
    for n in range(args.nmin, args.nmax + 1):
        t0 = time.perf_counter()
        fc = gen_full_circulant(n)
        ones = tuple(Fraction(1) for _ in range(n))
        row = []
        for d in degrees:
            _, v, _ = optimize(build_standard_sa(fc, d), ones, "min")
            row.append(format_fraction(v))
        family = build_spanning_set(fc, args.pi)
        _, v, _ = optimize(build_sa_lp(fc, family), ones, "min")
        row.append(format_fraction(v))
        hull = min(z.bit_count() for z in feasible_masks(fc))
        row.append(str(hull))
        row.append(f"{time.perf_counter() - t0:.1f}s")
        print(str(n).ljust(6) + "".join(v.ljust(10) for v in row))


if __name__ == "__main__":
    main()
