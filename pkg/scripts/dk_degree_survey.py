#!/usr/bin/env python3
"""Survey the direct-kinematics elimination degree across design classes:
self-motion designs drop to 4, bond-only designs to 6, generic stays at 8."""

import argparse
import random
import sys
from fractions import Fraction as F

from pentakin import (GaussRat, Leg, Pentapod, canonical_pentapod,
                      displacement, lift_study, max_real_solutions, solve_dk,
                      synth_leg_params)
from pentakin.archsing import classify_arch, validate_assumptions
from pentakin.kinmap import StudyParams


def random_member(rng):
    while True:
        try:
            p = Pentapod(tuple(
                Leg(F(rng.randint(-6, 6), rng.randint(1, 4)),
                    tuple(F(rng.randint(-6, 6), rng.randint(1, 4))
                          for _ in range(3)))
                for _ in range(5)))
        except Exception:
            continue
        if len(set(p.platform)) == 5 and validate_assumptions(p).ok \
                and not classify_arch(p).singular:
            return p


def random_pose_lengths(rng, p):
    while True:
        e = [F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(4)]
        if all(v == 0 for v in e):
            continue
        f = [F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(4)]
        k = next(i for i, v in enumerate(e) if v != 0)
        f[k] = -sum(e[i] * f[i] for i in range(4) if i != k) / e[k]
        m = lift_study(StudyParams(*e, *f))
        return [sum((pc - bc) ** 2 for pc, bc in
                    zip(displacement(m, leg.a), leg.base)) for leg in p.legs]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    d1 = synth_leg_params(1, a2=GaussRat(0, 1), a4=2, m5=(1, 1, 1), r1sq=3)
    ref = canonical_pentapod(d1, [0, 1, 3, -1, -2])
    out = solve_dk(ref, lengths=[2, 1, 5, 3, 4])
    print(f"self-motion design: degree {out.degree} "
          f"(bound {max_real_solutions(ref)})")

    counts = {}
    for _ in range(args.trials):
        p = random_member(rng)
        out = solve_dk(p, lengths2=random_pose_lengths(rng, p))
        counts[out.degree] = counts.get(out.degree, 0) + 1
        sys.stdout.write(".")
        sys.stdout.flush()
    print(f"\nrandom members: degree histogram {counts}")


if __name__ == "__main__":
    main()
