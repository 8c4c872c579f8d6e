"""How dilation residuals track the truncation estimate as the degree N grows.

For a pure tuple with a non-nilpotent P the moment residuals should stay
below the reported tail bound ||P^{N+1}|| * max(1, tau)^4 and decay with it.
"""

import argparse

from symdisc.corpus import kernel_tuple, normal_pure_tuple, rng_for
from symdisc.hardy_model import build_dilation, verify_dilation_moments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--family", choices=["normal", "kernel"], default="normal")
    ap.add_argument("--degrees", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    args = ap.parse_args()

    rng = rng_for(args.seed, "tail-study")
    t = normal_pure_tuple(rng, args.n, 4, radius=0.8) if args.family == "normal" else kernel_tuple(rng, args.n)
    print(f"{'N':>4} {'tail_bound':>12} {'moments':>12} {'coextension':>12}")
    for N in args.degrees:
        b = build_dilation(t, N)
        rep = verify_dilation_moments(b, t, 4)
        print(f"{N:4d} {b.tail_bound:12.3e} {rep.max_residual:12.3e} {rep.max_coextension:12.3e}")


if __name__ == "__main__":
    main()
