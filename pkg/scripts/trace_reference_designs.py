#!/usr/bin/env python3
"""Synthesize the two reference self-motion designs (straight cubic circle
and circle-plus-orthogonal-line), trace their configuration curves, and
export anchor-point trajectories as CSV."""

import argparse
import math
import pathlib

from pentakin import (GaussRat, displacement, real_legs_from_design,
                      synth_leg_params, trace)


def export(design, a_values, samples, out_path):
    tr = trace(design, samples=samples)
    legs = real_legs_from_design(design, a_values)
    cols = ["t", "branch"] + [f"p{k}_{ax}" for k in range(len(a_values))
                              for ax in "xyz"]
    lines = [",".join(cols)]
    for s in tr.samples:
        row = [f"{s.t:.17g}", s.branch]
        for leg in legs:
            P = displacement(s.params, float(leg.a))
            row.extend(f"{float(c):.17g}" for c in P)
        lines.append(",".join(row))
    out_path.write_text("\n".join(lines) + "\n")
    print(f"{out_path}: {len(tr.samples)} samples over "
          f"{[tuple(round(v, 6) for v in iv) for iv in tr.intervals]}")
    # sanity: leg lengths stay put along the curve
    worst = 0.0
    for leg in legs:
        target = math.sqrt(float(leg.r2))
        for s in tr.samples:
            P = displacement(s.params, float(leg.a))
            d = math.dist([float(c) for c in P],
                          [float(c) for c in leg.base])
            worst = max(worst, abs(d - target) / target)
    print(f"  max relative leg-length drift: {worst:.2e}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=120)
    ap.add_argument("--outdir", default="trace_out")
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(exist_ok=True)

    d1 = synth_leg_params(1, a2=GaussRat(0, 1), a4=2, m5=(1, 1, 1), r1sq=3)
    export(d1, [0, 1, 3, -1, -2], args.samples, outdir / "type1_trace.csv")

    d2 = synth_leg_params(2, a2=GaussRat(1, 1), m5=(1, 1, 0), r1sq=4)
    export(d2, [1, -1, 2, 3, -2], args.samples, outdir / "type2_trace.csv")


if __name__ == "__main__":
    main()
