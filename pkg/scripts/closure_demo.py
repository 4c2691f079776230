"""
Scaling against rounding cuts on seeded random packing instances.

For each instance and each t, pick the smallest d with (d/(d-1))^t below
1+epsilon, maximize over the pitch-(d-1) strengthened LP, shrink the
argmax by ((d-1)/d)^t and check it against every enumerated cut.  The
expected outcome is "ok" on every line; a VIOLATED anywhere means the
shrink factor no longer absorbs the rounding step.
"""
import argparse
from fractions import Fraction

from pitchforge.cgtools import closure_experiment
from pitchforge.instances import gen_random_packing
from pitchforge.ratio import format_fraction, parse_fraction


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=6)
    ap.add_argument("--tmax", type=int, default=3)
    ap.add_argument("--epsilon", default="1/2")
    ap.add_argument("--denom", type=int, default=2, help="multiplier grid 1/denom")
    args = ap.parse_args()
    eps = parse_fraction(args.epsilon)

    for s in range(args.seeds):
        n = 3 + s % 3
        inst = gen_random_packing(n, 2 + s % 3, seed=s)
        ones = tuple(Fraction(1) for _ in range(n))
        print(f"seed {s}: n={n}, {len(inst.rows)} rows")
        for t in range(args.tmax + 1):
            rep = closure_experiment(inst, ones, t, eps, denom_bound=args.denom)
            point = ", ".join(format_fraction(v) for v in rep.scaled_point)
            verdict = "ok" if rep.all_satisfied() else "VIOLATED"
            print(
                f"  t={t}: d={rep.d} lp={format_fraction(rep.lp_opt)}"
                f" opt_d={format_fraction(rep.opt_d)} scaled=({point})"
                f" cuts={len(rep.cuts)} {verdict}"
            )


if __name__ == "__main__":
    main()
