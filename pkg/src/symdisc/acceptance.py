"""The eleven acceptance criteria as runnable checks.

Each ``criterion_k(cfg)`` returns a ``CriterionResult``.  Thresholds quoted
as ``1e-8`` in the contract follow ``cfg.tol``; looser ones (``1e-6``) are
fixed.  A criterion also fails when it overruns its wall-clock limit.
"""

from __future__ import annotations

import time
import traceback
from dataclasses import dataclass, field

import numpy as np

from . import corpus
from .corpus import rng_for
from .errors import HypothesisViolation
from .gamma_ops import (
    check_gamma_contraction,
    diagonal_tuple,
    fot_radius_bound,
    fundamental_tuple,
    gamma3_to_gamma2,
    scalar_tuple,
    verify_fot_identities,
    verify_tetra,
)
from .hardy_model import (
    build_dilation,
    model_compression,
    verify_admissibility,
    verify_dilation_moments,
    verify_l0,
)
from .joint_spectrum import commuting_tuple, match_distance, taylor_spectrum
from .matrix_core import numerical_radius
from .polydisc_geometry import (
    Region,
    SymPoint,
    classify,
    classify_coords,
    gamma2_closed_form,
    gamma2_margins,
    random_polydisc,
    symmetrize_rows,
)
from .variety import (
    boundary_exit_report,
    build_variety,
    fiber,
    fiber_distance,
    fiber_points,
    project_g3_to_g2,
    pushforward,
    separation_certificate,
    trace_points,
    vn_inequality_check,
)


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 0
    tol: float = 1e-8
    enforce_time: bool = True


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    limit: float
    stats: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.number:2d} {self.name}: {self.detail} ({self.elapsed:.1f}s / {self.limit:.0f}s)"


def _run(number: int, name: str, limit: float, cfg: AcceptanceConfig, body) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail, stats = body(cfg)
    except Exception as exc:  # a crash is a failure, reported with its cause
        ok, detail, stats = False, f"raised {type(exc).__name__}: {exc}", {"traceback": traceback.format_exc()}
    elapsed = time.perf_counter() - t0
    if cfg.enforce_time and elapsed >= limit:
        ok, detail = False, detail + f"; over time limit {limit:.0f}s"
    return CriterionResult(number, name, bool(ok), detail, elapsed, limit, stats)


# --------------------------------------------------------------------------


def _c1(cfg):
    rng = rng_for(cfg.seed, "c1")
    box = rng.uniform(-3.0, 3.0, (10_000, 4))
    pts = [(complex(a, b), complex(c, d)) for a, b, c, d in box]
    # extra coverage near the set, where the box rarely lands
    near = symmetrize_rows(random_polydisc(rng, 2, 10_000, 1.1))
    pts += [(complex(s), complex(p)) for s, p in near]
    checked = disagree = inside = 0
    for s, p in pts:
        if min(abs(m) for m in gamma2_margins(s, p)) < 1e-6:
            continue
        checked += 1
        closed = gamma2_closed_form(s, p)
        inside += closed
        if classify(SymPoint(n=2, s=np.array([s]), p=p)).inside != closed:
            disagree += 1
    return disagree == 0, f"{disagree} disagreements on {checked} points ({inside} inside)", {"disagreements": disagree}


def _c2(cfg):
    bad_in = bad_out = 0
    for n in (2, 3, 4):
        rng = rng_for(cfg.seed, "c2", n)
        z = random_polydisc(rng, n, 10_000, 1.0)
        for row in symmetrize_rows(z):
            bad_in += classify_coords(row) is Region.Outside
        w = random_polydisc(rng, n, 1_000, 1.0)
        j = rng.integers(0, n, 1_000)
        w[np.arange(1_000), j] = (1.01 + 2.0 * rng.random(1_000)) * np.exp(2j * np.pi * rng.random(1_000))
        for row in symmetrize_rows(w):
            bad_out += classify_coords(row) is not Region.Outside
    fails = bad_in + bad_out
    return fails == 0, f"{bad_in} closed-polydisc images rejected, {bad_out} exterior images accepted", {"failures": fails}


def _c3(cfg):
    worst = 0.0
    for k in range(200):
        rng = rng_for(cfg.seed, "c3", k)
        order, arity = int(rng.integers(2, 13)), int(rng.integers(2, 4))
        mats, planted = corpus.planted_triangular_family(rng, order, arity)
        got = taylor_spectrum(commuting_tuple(mats)).points
        worst = max(worst, match_distance(got, planted))
    return worst <= 1e-6, f"worst matching distance {worst:.3e} over 200 tuples", {"worst": worst}


def _c4(cfg):
    fot_w = inter_w = radius_w = 0.0
    for k in range(100):
        t, _ = corpus.generated_tuple(rng_for(cfg.seed, "c4", k), 3, 20, conjugate=k % 2 == 1)
        a = fundamental_tuple(t)
        fot_w = max(fot_w, max(a.residuals))
        inter_w = max(inter_w, max(verify_tetra(t, a)))
        radius_w = max(radius_w, fot_radius_bound(a, 3, 64))
    ok = fot_w <= cfg.tol and inter_w <= cfg.tol and radius_w <= 3 + 1e-6
    return ok, f"FOT {fot_w:.2e}, intertwining {inter_w:.2e}, radius {radius_w:.6f} (bound 3)", {
        "fot": fot_w,
        "intertwining": inter_w,
        "radius": radius_w,
    }


def _identity_corpus(seed: int):
    out = []
    for k in range(20):
        out.append(corpus.generated_tuple(rng_for(seed, "c5g", k), 2 + k % 3, 16, conjugate=k % 2 == 1)[0])
    for k in range(20):
        out.append(corpus.kernel_tuple(rng_for(seed, "c5k", k), 2 + k % 3))
    for k in range(10):
        out.append(corpus.invertible_normal_tuple(rng_for(seed, "c5n", k), 2 + k % 3))
    for k in range(10):
        out.append(corpus.mixed_tuple(rng_for(seed, "c5m", k), 3, 16))
    return out


def _c5(cfg):
    worst, fails, passes, skipped = 0.0, 0, 0, 0
    for t in _identity_corpus(cfg.seed):
        a, b = fundamental_tuple(t), fundamental_tuple(t.adjoint())
        rep = verify_fot_identities(t, a, b, cfg.tol)
        for c in rep.checks:
            if c.status == "Skipped":
                skipped += 1
                continue
            if c.status == "Fail":
                fails += 1
            else:
                passes += 1
            worst = max(worst, c.residual / t.scale**2)
    return fails == 0, f"{passes} pass, {skipped} skipped, {fails} fail; worst relative residual {worst:.2e}", {
        "fails": fails,
        "skipped": skipped,
        "worst": worst,
    }


def _c6(cfg):
    ratio, tail_w, moment_w = 0.0, 0.0, 0.0
    for k in range(24):
        t, _ = corpus.generated_tuple(rng_for(cfg.seed, "c6", k), 2 + k % 3, 16, conjugate=k % 2 == 1)
        bundle = build_dilation(t, tol=cfg.tol)
        rep = verify_dilation_moments(bundle, t, 4)
        worst = max(rep.max_residual, rep.max_coextension)
        moment_w = max(moment_w, worst)
        tail_w = max(tail_w, bundle.tail_bound)
        ratio = max(ratio, worst / bundle.tail_bound)
    l0_w = 0.0
    for k in range(12):
        rng = rng_for(cfg.seed, "c6l", k)
        p = corpus.small_contraction(rng, int(rng.integers(2, 7)), norm=0.1 + 0.4 * rng.random())
        rep = verify_l0(p, 40)
        l0_w = max(l0_w, rep.residual, rep.kernel_residual)
    ok = ratio <= 10.0 and tail_w <= cfg.tol and l0_w <= cfg.tol
    return ok, f"moments {moment_w:.2e} = {ratio:.3f} x tail_bound, tail_bound {tail_w:.2e}, L0 {l0_w:.2e}", {
        "ratio": ratio,
        "tail": tail_w,
        "l0": l0_w,
    }


def _c7(cfg):
    model_w = adm_w = 0.0
    for k in range(24):
        t, _ = corpus.generated_tuple(rng_for(cfg.seed, "c6", k), 2 + k % 3, 16, conjugate=k % 2 == 1)
        model_w = max(model_w, model_compression(t, tol=cfg.tol).residual)
        a, b = fundamental_tuple(t), fundamental_tuple(t.adjoint())
        adm_w = max(adm_w, verify_admissibility(a, b, t.p_op, 32).worst)
    ok = model_w <= cfg.tol and adm_w <= cfg.tol
    return ok, f"model residual {model_w:.2e}, admissibility {adm_w:.2e}", {"model": model_w, "admissibility": adm_w}


def _c8(cfg):
    outside, exit_w = 0, 0.0
    for k in range(50):
        rng = rng_for(cfg.seed, "c8", k)
        n, d = 2 + k % 2, int(rng.integers(2, 7))
        v = corpus.valid_variety(rng, n, d, "normal" if k % 4 < 2 else "small")
        for fb in (fiber(v, p) for p in 0.95 * np.exp(2j * np.pi * np.arange(8) / 8) * (np.arange(8) + 1) / 8):
            outside += sum(tag is Region.Outside for tag in fb.region_tags)
        exit_w = max(exit_w, boundary_exit_report(v, 360).max_defect)
    ok = outside == 0 and exit_w <= 1e-6
    return ok, f"{outside} interior fiber points outside, max exit defect {exit_w:.2e}", {
        "outside": outside,
        "exit": exit_w,
    }


def _nonexample(rng, n: int) -> tuple:
    """Diagonal tuple with one joint eigenvalue on the boundary but off the torus image."""
    z = random_polydisc(rng, n, 3, 0.8)
    z[0, 0] = np.exp(2j * np.pi * rng.random())
    return diagonal_tuple(symmetrize_rows(z))


def _c9(cfg):
    worst, tuples = np.inf, 0
    for k in range(6):
        rng = rng_for(cfg.seed, "c9", k)
        n = 2 + k % 2
        t, f = corpus.generated_tuple(rng, n, 10)
        v = build_variety(f)
        rep = vn_inequality_check(t, v, poly_count=100, seed=cfg.seed + k, tol=cfg.tol)
        worst = min(worst, rep.worst_slack)
        tuples += 1
    for k in range(4):
        # non-normal P: the adjoint's fundamental tuple is only unitarily
        # equivalent to the planted data, so the variety is built from it
        t = corpus.kernel_tuple(rng_for(cfg.seed, "c9k", k), 2 + k % 2)
        v = build_variety(fundamental_tuple(t.adjoint()).matrices)
        rep = vn_inequality_check(t, v, poly_count=100, seed=cfg.seed + 50 + k, tol=cfg.tol)
        worst = min(worst, rep.worst_slack)
        tuples += 1
    rejected = 0
    for k in range(6):
        rng = rng_for(cfg.seed, "c9x", k)
        n = 2 + k % 2
        bad = _nonexample(rng, n)
        v = build_variety(corpus.normal_fundamental_data(rng, n, 3))
        try:
            vn_inequality_check(bad, v, poly_count=1, tol=cfg.tol)
        except HypothesisViolation:
            rejected += 1
    ok = worst >= -1e-6 and rejected == 6
    return ok, f"worst slack {worst:.3e} over {tuples} tuples x 100 polynomials; {rejected}/6 non-examples rejected", {
        "worst": worst,
        "rejected": rejected,
    }


def _c10(cfg):
    margin_w, checked, fails = np.inf, 0, 0
    for k in range(4):
        rng = rng_for(cfg.seed, "c10", k)
        n = 2 + k % 2
        v = corpus.valid_variety(rng, n, int(rng.integers(2, 5)), "normal" if k < 2 else "small")
        samples = trace_points(v, 8, 32)
        pts = symmetrize_rows(random_polydisc(rng, n, 1_400, 1.0))
        count = 0
        for row in pts:
            x = SymPoint.from_coords(row)
            if fiber_distance(v, x) < 1e-3:
                continue
            cert = separation_certificate(v, x, cfg.tol, samples=samples)
            margin = cert.value_at_x - cert.sup_on_variety
            margin_w = min(margin_w, margin)
            fails += margin <= cfg.tol
            count += 1
            if count == 250:
                break
        checked += count
    ok = fails == 0 and checked == 1_000
    return ok, f"{fails} failures on {checked} points, smallest margin {margin_w:.3e}", {"fails": fails, "checked": checked}


def _c11(cfg):
    omega_w, agree_w = 0.0, 0.0
    for k in range(20):
        rng = rng_for(cfg.seed, "c11", k)
        v = corpus.valid_variety(rng, 3, int(rng.integers(2, 5)), "normal" if k % 2 == 0 else "small")
        w = project_g3_to_g2(v)
        omega_w = max(omega_w, numerical_radius(w.f[0]))
        for p in 0.9 * np.exp(2j * np.pi * rng.random(6)) * rng.random(6) ** 0.5:
            agree_w = max(agree_w, match_distance(fiber_points(w, p), pushforward(fiber_points(v, p))))
    exact_ok = 0
    for k in range(10):
        t = corpus.normal_pure_tuple(rng_for(cfg.seed, "c11t", k), 3, 4)
        rep = check_gamma_contraction(gamma3_to_gamma2(t, np.exp(2j * np.pi * k / 10)))
        exact_ok += rep.exact and rep.passed
    src = SymPoint(n=3, s=np.array([2.0, 2.5]), p=0.5)
    src_rejected = classify(src) is Region.Outside and not check_gamma_contraction(scalar_tuple(src)).passed
    img = gamma3_to_gamma2(scalar_tuple(src))
    img_accepted = check_gamma_contraction(img).passed and classify(SymPoint(n=2, s=np.diag(img.s_ops[0]), p=img.p_op[0, 0])).inside
    ok = omega_w < 1.0 and agree_w <= 1e-6 and exact_ok == 10 and src_rejected and img_accepted
    return ok, (
        f"max omega {omega_w:.4f}, fiber agreement {agree_w:.2e}, {exact_ok}/10 exact checks, "
        f"(2, 5/2, 1/2) rejected={src_rejected} image accepted={img_accepted}"
    ), {"omega": omega_w, "agreement": agree_w}


CRITERIA = [
    (1, "membership oracle equivalence (n=2)", 5.0, _c1),
    (2, "symmetrization soundness", 10.0, _c2),
    (3, "joint-spectrum reconstruction", 30.0, _c3),
    (4, "fundamental tuple residuals", 60.0, _c4),
    (5, "fundamental tuple identity suite", 60.0, _c5),
    (6, "dilation fidelity", 120.0, _c6),
    (7, "model round-trip", 60.0, _c7),
    (8, "variety distinguishedness", 60.0, _c8),
    (9, "von Neumann inequality on varieties", 120.0, _c9),
    (10, "separation certificates", 30.0, _c10),
    (11, "projection from n=3 to n=2", 30.0, _c11),
]


def run_criterion(number: int, cfg: AcceptanceConfig | None = None) -> CriterionResult:
    cfg = cfg or AcceptanceConfig()
    num, name, limit, body = CRITERIA[number - 1]
    return _run(num, name, limit, cfg, body)


def run_all(cfg: AcceptanceConfig | None = None, only=None) -> list:
    cfg = cfg or AcceptanceConfig()
    picks = only or [c[0] for c in CRITERIA]
    return [run_criterion(k, cfg) for k in picks]
