"""Run the acceptance criteria for one or more seeds and print a verdict table."""

import argparse
import sys

from symdisc.acceptance import AcceptanceConfig, run_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--only", type=int, nargs="+")
    ap.add_argument("--no-time-limits", action="store_true")
    args = ap.parse_args()

    failed = 0
    for seed in args.seeds:
        cfg = AcceptanceConfig(seed=seed, tol=args.tol, enforce_time=not args.no_time_limits)
        print(f"# seed {seed}")
        for res in run_all(cfg, args.only):
            print(res.line(), flush=True)
            failed += not res.passed
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
