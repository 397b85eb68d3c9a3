#!/usr/bin/env python3
"""Regularity-condition reports for width functions over base rotations:
the smoothing regime (beck over the golden rotation) passes all three trend
flags, the concentration regime (power_log over the engineered
well-approximable rotation) fails the divergence of g/D.

Usage: python scripts/run_condition_checks.py [--n 100000]
"""

import argparse
import sys

from modone import (GOLDEN_ALPHA, LIOUVILLE_ALPHA, ScaleFunction,
                    arithmetic_sequence, check_g_conditions, discrepancy_profile)


def report(name, scale, alpha, n, ratio):
    seq = arithmetic_sequence(alpha, n)
    prof = discrepancy_profile(seq, grid="geometric", ratio=ratio)
    rep = check_g_conditions(scale, prof)
    s1, s2, s3 = rep.slopes
    print(f"{name}: slopes g/D={s1:+.4f} Ng={s2:+.4f} |stretch-1|={s3:+.2e}")
    print(f"  flags: g/D diverges={rep.passes_divergence_g_over_d} "
          f"Ng diverges={rep.passes_divergence_ng} stretch->1={rep.passes_stretch_to_one}")
    return rep


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--ratio", type=float, default=1.06)
    args = ap.parse_args()

    report("beck(1) over golden rotation", ScaleFunction.beck(1.0),
           GOLDEN_ALPHA, args.n, args.ratio)
    report("power_log(0.5) over well-approximable rotation",
           ScaleFunction.power_log(0.5), LIOUVILLE_ALPHA, args.n, args.ratio)
    report("constant(0.1) over golden rotation", ScaleFunction.constant(0.1),
           GOLDEN_ALPHA, args.n, args.ratio)
    return 0


if __name__ == "__main__":
    sys.exit(main())
