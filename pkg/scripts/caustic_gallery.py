#!/usr/bin/env python3
"""Render the caustic/level/Maxwell overlay for each bundled scenario at a
sweep of times (one SVG per time)."""

import argparse
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hjburgers.runner import run_scenario
from hjburgers.scenario import load_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scenario", help="scenario file (geometry products)")
    ap.add_argument("--times", nargs="+", default=["1/2", "1", "3/2"], help="t values")
    ap.add_argument("--out", default="artifacts/gallery")
    args = ap.parse_args()
    scn = load_scenario(args.scenario)
    for t_txt in args.times:
        scn.t = Fraction(t_txt)
        outdir = os.path.join(args.out, f"t_{str(scn.t).replace('/', 'over')}")
        ctx = run_scenario(scn, outdir)
        print(f"t = {scn.t}: wrote {len(ctx.files)} files to {outdir}")


if __name__ == "__main__":
    main()
