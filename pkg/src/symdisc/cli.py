"""Command-line entry point: ``symdisc <command> [options]``.

Exit codes: 0 success, 1 a mathematical check failed or input data is
invalid, 2 the input could not be parsed or used.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import io
from .acceptance import AcceptanceConfig, run_all
from .errors import HypothesisViolation, InvalidVarietyData, ParseError, SymdiscError, UsageError
from .gamma_ops import fundamental_tuple, verify_fot_identities
from .hardy_model import build_dilation, verify_dilation_moments
from .joint_spectrum import commuting_tuple, taylor_spectrum
from .polydisc_geometry import Region, membership
from .variety import build_variety, trace, vn_inequality_check


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tol: float = 1e-8
    grid: tuple = (4, 8)
    degree: int | None = None
    output_path: str | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("tol must be positive")
        if len(self.grid) != 2 or min(self.grid) < 1:
            raise UsageError("grid sizes must be at least 1")
        if self.degree is not None and self.degree < 1:
            raise UsageError("degree must be at least 1")


def parse_grid(text: str) -> tuple:
    try:
        r, a = text.lower().split("x")
        return int(r), int(a)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must look like RxA, got {text!r}") from exc


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output_path:
        io.write_text(cfg.output_path, text)
    else:
        sys.stdout.write(text)


def _pairs(vec) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex)]


# --------------------------------------------------------------------------


def cmd_member(args, cfg: RunConfig) -> int:
    x = io.point_from_json(io.read_json(args.point))
    m = membership(x, cfg.tol)
    lines = [m.region.name]
    if m.region.inside:
        lines += [f"c[{k}] = {_pairs(c)}" for k, c in enumerate(m.chain, start=1)]
    elif m.reason:
        lines.append(f"reason: {m.reason}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 1 if m.region is Region.Outside else 0


def cmd_spectrum(args, cfg: RunConfig) -> int:
    mats = io.matrices_from_json(io.read_json(args.matrices))
    if not mats:
        raise UsageError("empty matrix list")
    js = taylor_spectrum(commuting_tuple(mats, tol=cfg.tol))
    _emit(cfg, io.dumps(io.spectrum_to_json(js)))
    return 0


def cmd_fot(args, cfg: RunConfig) -> int:
    t = io.tuple_from_json(io.read_json(args.tuple))
    a, b = fundamental_tuple(t), fundamental_tuple(t.adjoint())
    rep = verify_fot_identities(t, a, b, cfg.tol)
    out = {
        "A": [io.matrix_to_json(m) for m in a.matrices],
        "B": [io.matrix_to_json(m) for m in b.matrices],
        "A_residuals": list(a.residuals),
        "B_residuals": list(b.residuals),
        "identities": rep.as_rows(),
        "passed": rep.passed,
    }
    _emit(cfg, io.dumps(out))
    return 0 if rep.passed else 1


def cmd_variety(args, cfg: RunConfig) -> int:
    mats = io.matrices_from_json(io.read_json(args.matrices))
    if not mats:
        raise UsageError("empty matrix list")
    v = build_variety(mats, cfg.tol, enforce=False)
    if args.action == "check":
        _emit(cfg, io.dumps(v.validity.as_dict()))
        return 0 if v.validity.valid else 1
    if not v.validity.valid:
        sys.stderr.write(io.dumps(v.validity.as_dict()))
        return 1
    _emit(cfg, io.trace_csv(v.n, trace(v, *cfg.grid, tol=cfg.tol)))
    return 0


def cmd_dilate(args, cfg: RunConfig) -> int:
    t = io.tuple_from_json(io.read_json(args.tuple))
    b = build_dilation(t, cfg.degree, cfg.tol)
    rep = verify_dilation_moments(b, t, 4)
    out = {
        "degree": b.space.degree,
        "identity": b.identity,
        "tail_bound": b.tail_bound,
        "intertwining": b.residuals,
        "coextension": rep.coextension,
        "max_moment_residual": rep.max_residual,
        "moments": {"".join(map(str, e)): r for e, r in sorted(rep.residuals.items())},
    }
    _emit(cfg, io.dumps(out))
    if args.dump_blocks:
        blocks = {
            "T": [io.matrix_to_json(m) for m in b.t_ops],
            "V": io.matrix_to_json(b.v_op),
            "W": io.matrix_to_json(b.w_op),
        }
        io.write_text(args.dump_blocks, io.dumps(blocks))
    return 0


def cmd_vncheck(args, cfg: RunConfig) -> int:
    t = io.tuple_from_json(io.read_json(args.tuple))
    if args.variety:
        f = io.matrices_from_json(io.read_json(args.variety))
    else:
        src = t if args.literal else t.adjoint()
        f = fundamental_tuple(src, cfg.tol).matrices
        if not f or f[0].size == 0:
            raise HypothesisViolation("trivial defect space: no variety to test against")
    v = build_variety(f, cfg.tol)
    rep = vn_inequality_check(t, v, poly_count=args.polys, seed=cfg.seed, tol=cfg.tol, literal=args.literal)
    out = {
        "worst_slack": rep.worst_slack,
        "fot_distance": rep.fot_distance,
        "polynomials": len(rep.slacks),
        "slacks": rep.slacks,
    }
    _emit(cfg, io.dumps(out))
    return 0 if rep.worst_slack >= -1e-6 else 1


def cmd_selftest(args, cfg: RunConfig) -> int:
    acfg = AcceptanceConfig(seed=cfg.seed, tol=cfg.tol, enforce_time=not args.no_time_limits)
    results = run_all(acfg, args.only)
    lines = [r.line() for r in results]
    failed = [r for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    if failed:
        lines.append("failed: " + ", ".join(str(r.number) for r in failed))
    _emit(cfg, "\n".join(lines) + "\n")
    return 1 if failed else 0


# --------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--tol", type=float, default=d(1e-8), help="numerical tolerance (default 1e-8)")
    parser.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    parser.add_argument("--out", default=d(None), help="write the main output here instead of stdout")
    parser.add_argument("--degree", type=int, default=d(None), help="truncation degree N for dilations")
    parser.add_argument("--grid", type=parse_grid, default=d((4, 8)), help="trace grid as RxA (default 4x8)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symdisc", description="Numerics on the symmetrized polydisc.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    p = sub.add_parser("member", parents=[common], help="classify a point")
    p.add_argument("point", help="point JSON file")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("spectrum", parents=[common], help="joint spectrum of commuting matrices")
    p.add_argument("matrices", help="matrix-array JSON file")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("fot", parents=[common], help="fundamental tuples and identity residuals")
    p.add_argument("tuple", help="tuple JSON file with keys S and P")
    p.set_defaults(func=cmd_fot)

    p = sub.add_parser("variety", parents=[common], help="trace or check a variety datum")
    p.add_argument("action", choices=["trace", "check"])
    p.add_argument("matrices", help="matrix-array JSON file")
    p.set_defaults(func=cmd_variety)

    p = sub.add_parser("dilate", parents=[common], help="truncated isometric dilation")
    p.add_argument("tuple", help="tuple JSON file")
    p.add_argument("--dump-blocks", metavar="PATH", help="write T, V, W as matrix JSON")
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("vncheck", parents=[common], help="sampled von Neumann inequality on a variety")
    p.add_argument("tuple", help="tuple JSON file")
    p.add_argument("--variety", help="matrix-array JSON; default is the adjoint's fundamental tuple")
    p.add_argument("--polys", type=int, default=100, help="number of random polynomials")
    p.add_argument("--literal", action="store_true", help="wire the variety to the tuple's own fundamental tuple")
    p.set_defaults(func=cmd_vncheck)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    p.add_argument("--only", type=int, nargs="+", choices=range(1, 12), metavar="K", help="criteria to run")
    p.add_argument("--no-time-limits", action="store_true", help="do not fail criteria on wall-clock limits")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(seed=args.seed, tol=args.tol, grid=tuple(args.grid), degree=args.degree, output_path=args.out)
        return args.func(args, cfg)
    except (ParseError, UsageError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except InvalidVarietyData as exc:
        sys.stderr.write(f"error: {exc}\n")
        if getattr(exc, "report", None) is not None:
            sys.stderr.write(io.dumps(exc.report.as_dict()))
        return 1
    except SymdiscError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
