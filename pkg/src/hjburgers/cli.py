"""Command-line front end: `hjburgers run <scenario>` and
`hjburgers verify <scenario>`.

Exit codes: 0 success, 1 verification mismatch, 2 validation error,
3 computation failure."""

from __future__ import annotations

import argparse
import os
import sys

from .runner import ComputationError, VerificationError, run_scenario, verify_scenario
from .scenario import ScenarioError, load_scenario

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_VALIDATION = 2
EXIT_COMPUTATION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hjburgers",
        description=(
            "Exact caustic/Maxwell-set geometry and turbulence processes for "
            "polynomial initial data of the inviscid stochastic Burgers equation"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "compute the requested products and write artifacts"),
        ("verify", "run and compare against the scenario's expectations"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scenario", help="scenario file")
        p.add_argument("--out", default=None, help="output directory (default: artifacts/<name>)")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument("--threads", type=int, default=1, help="worker hint for ensembles")
        p.add_argument(
            "--tol-report",
            action="store_true",
            help="print the tolerance table before running",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scn = load_scenario(args.scenario)
    except (ScenarioError, OSError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.seed is not None:
        scn.seed = args.seed
    outdir = args.out or os.path.join("artifacts", scn.name)
    if args.tol_report:
        for k, v in sorted(scn.tolerances().items()):
            print(f"tolerance {k} = {v}")
    if args.command == "run":
        try:
            ctx = run_scenario(scn, outdir, threads=args.threads)
        except ComputationError as e:
            print(f"computation error: {e}", file=sys.stderr)
            return EXIT_COMPUTATION
        print(f"wrote {len(ctx.results['manifest']['files'])} artifacts to {outdir}")
        return EXIT_OK
    # verify
    try:
        report, ok = verify_scenario(scn, outdir, threads=args.threads)
    except VerificationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ComputationError as e:
        print(f"computation error: {e}", file=sys.stderr)
        return EXIT_COMPUTATION
    for row in report:
        status = "PASS" if row["pass"] else "FAIL"
        print(
            f"[{status}] {row['kind']}: expected {row['expected']!r} "
            f"observed {row['observed']!r} (tol {row['tolerance']})"
        )
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
