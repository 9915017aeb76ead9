#!/usr/bin/env python3
"""Track the complex double points of a caustic across a time sweep and
locate the swallowtail perestroika where a pair joins the real curve."""

import argparse
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hjburgers.action import build_reduced_action
from hjburgers.geometry import complex_double_points, compute_caustic, perestroika_detect
from hjburgers.scenario import load_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scenario")
    ap.add_argument("--t-grid", nargs=3, default=["2.0", "3.0", "11"], metavar=("LO", "HI", "N"))
    args = ap.parse_args()
    scn = load_scenario(args.scenario)
    ra = build_reduced_action(scn.initial_data)
    ca = compute_caustic(ra)
    events = perestroika_detect(ra, ca, t_range=scn.t_range)
    for ev in events:
        print(
            f"perestroika: t = {ev.t:.8f} lam = {ev.lam:.6f} "
            f"certificate = {ev.certificate} point = {ev.point}"
        )
    lo, hi, n = Fraction(args.t_grid[0]), Fraction(args.t_grid[1]), int(args.t_grid[2])
    print(f"{'t':>8} {'count':>5}  (a, eta) pairs")
    for k in range(n):
        tv = lo + (hi - lo) * k / (n - 1)
        pts = complex_double_points(ca, tv, a_window=(float(scn.a_window[0]), float(scn.a_window[1])), eta_window=(float(scn.eta_window[0]), float(scn.eta_window[1])))
        pairs = " ".join(f"({p.a:+.3f},{p.eta:.3f})" for p in pts)
        print(f"{float(tv):8.3f} {len(pts):5d}  {pairs}")


if __name__ == "__main__":
    main()
