"""Trace a random valid variety and write the fiber CSV plus its boundary-exit defect.

Example: python3 scripts/trace_variety.py --n 3 --order 3 --grid 16x64 --out trace.csv
"""

import argparse

from symdisc import io
from symdisc.cli import parse_grid
from symdisc.corpus import rng_for, valid_variety
from symdisc.variety import boundary_exit_report, trace


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--order", type=int, default=3)
    ap.add_argument("--kind", choices=["normal", "small"], default="normal")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--grid", type=parse_grid, default=(8, 32))
    ap.add_argument("--out", default="trace.csv")
    args = ap.parse_args()

    v = valid_variety(rng_for(args.seed, "trace-script"), args.n, args.order, args.kind)
    io.write_text(args.out, io.trace_csv(v.n, trace(v, *args.grid)))
    rep = boundary_exit_report(v, 360)
    print(f"wrote {args.out}; boundary exit defect {rep.max_defect:.3e} at p = {rep.worst_p:.4f}")


if __name__ == "__main__":
    main()
