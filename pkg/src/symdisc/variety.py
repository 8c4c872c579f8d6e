"""Distinguished varieties given by matrix pencils.

A datum ``(F_1, ..., F_{n-1})`` of ``d x d`` matrices determines the set of
points ``(s, p)`` with ``s`` a joint eigenvalue of the pencil tuple
``(F_1* + p F_{n-1}, ..., F_{n-1}* + p F_1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import polys
from .errors import HypothesisViolation, InvalidVarietyData, NoCertificate, ProjectionFailure, UsageError
from .gamma_ops import GammaTuple, fundamental_tuple, is_pure
from .joint_spectrum import commuting_tuple, taylor_spectrum
from .matrix_core import adj, as_square, commutator, golden_max, is_normal, max_commutator_defect, norm2, numerical_radius
from .polydisc_geometry import (
    Region,
    SymPoint,
    boundary_relation_defect,
    classify,
    classify_coords,
    distinguished_scaled,
    gamma_excess,
    polar_grid,
)

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class ValidityReport:
    commuting: float
    cross_commutator: float
    spectrum_in_g: bool
    spectrum_adj_in_g: bool
    offending: str = ""
    tol: float = DEFAULT_TOL

    @property
    def valid(self) -> bool:
        return (
            self.commuting <= self.tol
            and self.cross_commutator <= self.tol
            and self.spectrum_in_g
            and self.spectrum_adj_in_g
        )

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "commuting": self.commuting,
            "cross_commutator": self.cross_commutator,
            "spectrum_in_g": self.spectrum_in_g,
            "spectrum_adj_in_g": self.spectrum_adj_in_g,
            "offending": self.offending,
        }


@dataclass(frozen=True)
class VarietyRep:
    n: int
    f: tuple
    validity: ValidityReport
    normal_eigs: np.ndarray | None = None

    @property
    def order(self) -> int:
        return self.f[0].shape[0]

    def pencils(self, p: complex) -> list:
        n = self.n
        return [adj(self.f[i - 1]) + p * self.f[n - i - 1] for i in range(1, n)]


def _open_interior(points) -> tuple:
    for pt in points:
        if classify_coords(pt, DEFAULT_TOL) is not Region.OpenInterior:
            return False, pt
    return True, None


def build_variety(f, tol: float = DEFAULT_TOL, enforce: bool = True) -> VarietyRep:
    """Validate pencil data and return its representation.

    The cross-commutator ``[F_i*, F_{n-j}] - [F_j*, F_{n-i}]`` is the
    coefficient of ``p`` in the commutator of two pencils, so together with
    commutativity of the ``F_i`` it makes every pencil tuple commute.  The
    joint spectra of ``(F_i)`` and ``(F_i*)`` must lie in the open set one
    dimension down.

    With ``enforce=False`` an invalid datum is returned instead of raising.
    """
    mats = tuple(as_square(m) for m in f)
    if not mats:
        raise UsageError("variety data needs at least one matrix")
    d = mats[0].shape[0]
    if any(m.shape != (d, d) for m in mats):
        raise UsageError("variety matrices must share one order")
    n = len(mats) + 1
    scale = max([1.0] + [norm2(m) for m in mats]) ** 2
    comm = max_commutator_defect(mats) / scale
    cross, worst_pair = 0.0, ""
    for i in range(1, n):
        for j in range(i + 1, n):
            val = norm2(
                commutator(adj(mats[i - 1]), mats[n - j - 1]) - commutator(adj(mats[j - 1]), mats[n - i - 1])
            ) / scale
            if val > cross:
                cross, worst_pair = val, f"(i, j) = ({i}, {j})"
    offending = ""
    spec_ok = spec_adj_ok = False
    try:
        pts = taylor_spectrum(commuting_tuple(mats, tol=max(tol, 1e-6))).points
        spec_ok, bad = _open_interior(pts)
        spec_adj_ok, bad_adj = _open_interior(np.conj(pts))
        if not spec_ok:
            offending = f"joint eigenvalue {np.round(bad, 10).tolist()} not in the open set"
        elif not spec_adj_ok:
            offending = f"conjugate joint eigenvalue {np.round(bad_adj, 10).tolist()} not in the open set"
    except UsageError:
        offending = "matrices do not commute"
    if comm > tol:
        offending = f"commutator defect {comm:.3e}"
    elif cross > tol:
        offending = f"cross-commutator defect {cross:.3e} at {worst_pair}"
    report = ValidityReport(comm, cross, spec_ok, spec_adj_ok, offending, tol)
    if enforce and not report.valid:
        raise InvalidVarietyData(f"invalid variety data: {offending}", report)
    normal_eigs = None
    if report.valid and all(is_normal(m, 1e-12) for m in mats):
        normal_eigs = pts
    return VarietyRep(n=n, f=mats, validity=report, normal_eigs=normal_eigs)


@dataclass(frozen=True)
class FiberSample:
    p: complex
    points: np.ndarray
    region_tags: tuple


def fiber_points(v: VarietyRep, p: complex) -> np.ndarray:
    """Joint eigenvalues of the pencil tuple at ``p`` (one row per point)."""
    if v.normal_eigs is not None:
        lam = v.normal_eigs
        return np.conj(lam) + p * lam[:, ::-1]
    return taylor_spectrum(commuting_tuple(v.pencils(p), tol=1e-6)).points


def fiber(v: VarietyRep, p: complex, tol: float = DEFAULT_TOL) -> FiberSample:
    """Fiber over ``p`` with each point tagged by its region."""
    pts = fiber_points(v, p)
    tags = tuple(classify(SymPoint(n=v.n, s=row, p=p), tol) for row in pts)
    return FiberSample(p=complex(p), points=pts, region_tags=tags)


def trace(v: VarietyRep, radial_steps: int = 4, angular_steps: int = 8, tol: float = DEFAULT_TOL) -> list:
    """Fibers over the polar grid, radius outer and angle inner."""
    return [fiber(v, p, tol) for p in polar_grid(radial_steps, angular_steps)]


def trace_points(v: VarietyRep, radial_steps: int, angular_steps: int) -> np.ndarray:
    """All ``(s, p)`` rows over the polar grid, without region tags."""
    rows = []
    for p in polar_grid(radial_steps, angular_steps):
        pts = fiber_points(v, p)
        rows.append(np.hstack([pts, np.full((pts.shape[0], 1), p)]))
    return np.vstack(rows)


def fiber_distance(v: VarietyRep, x: SymPoint) -> float:
    """Max-coordinate distance from ``x.s`` to the nearest fiber point over ``x.p``."""
    pts = fiber_points(v, x.p)
    return float(np.min(np.max(np.abs(pts - x.s[None, :]), axis=1)))


def contains(v: VarietyRep, x: SymPoint, tol: float = DEFAULT_TOL) -> bool:
    if x.n != v.n:
        raise UsageError("point and variety have different n")
    return fiber_distance(v, x) <= tol


def pencil_determinants(v: VarietyRep, x: SymPoint) -> np.ndarray:
    """``|det(F_k* + p F_{n-k} - s_k I)|`` for ``k = 1..n-1``."""
    eye = np.eye(v.order)
    return np.array([abs(np.linalg.det(m - x.s[k] * eye)) for k, m in enumerate(v.pencils(x.p))])


@dataclass(frozen=True)
class BoundaryExitReport:
    max_defect: float
    worst_p: complex
    worst_point: np.ndarray


def boundary_exit_defect(x: SymPoint) -> float:
    """Violation of the torus-image criteria by a point with ``|p| = 1``."""
    return max(boundary_relation_defect(x), gamma_excess(distinguished_scaled(x)))


def boundary_exit_report(v: VarietyRep, circle_samples: int = 360) -> BoundaryExitReport:
    """Worst torus-image violation among fiber points over the unit circle."""
    worst = (-1.0, 0j, None)
    for k in range(circle_samples):
        p = np.exp(2j * np.pi * k / circle_samples)
        for row in fiber_points(v, p):
            dfc = boundary_exit_defect(SymPoint(n=v.n, s=row, p=p))
            if dfc > worst[0]:
                worst = (dfc, complex(p), row)
    return BoundaryExitReport(max_defect=max(worst[0], 0.0), worst_p=worst[1], worst_point=worst[2])


@dataclass(frozen=True)
class SeparationCertificate:
    witness_index: int
    value_at_x: float
    sup_on_variety: float


def separation_certificate(
    v: VarietyRep, x: SymPoint, tol: float = DEFAULT_TOL, grid: tuple = (8, 32), samples: np.ndarray | None = None
) -> SeparationCertificate:
    """Polynomial ``g = det(F_k* + p F_{n-k} - s_k I)`` separating ``x`` from the variety.

    ``k`` maximises ``|g(x)|``.  ``samples`` may supply precomputed
    ``(s, p)`` rows of the variety; otherwise the trace grid is used.
    """
    vals = pencil_determinants(v, x)
    k = int(np.argmax(vals))
    if vals[k] <= tol:
        raise NoCertificate("all pencil determinants vanish at the point")
    pts = trace_points(v, *grid) if samples is None else samples
    sup = _det_sup(v, pts, k)
    return SeparationCertificate(witness_index=k + 1, value_at_x=float(vals[k]), sup_on_variety=sup)


def _det_sup(v: VarietyRep, pts: np.ndarray, k: int) -> float:
    n = v.n
    eye = np.eye(v.order)
    fk, fnk = adj(v.f[k]), v.f[n - k - 2]
    return float(max(abs(np.linalg.det(fk + row[-1] * fnk - row[k] * eye)) for row in pts))


def project_g3_to_g2(v: VarietyRep, tol: float = DEFAULT_TOL) -> VarietyRep:
    """Push an ``n = 3`` datum down to ``n = 2`` through ``(s_1 + s_2)/3``."""
    if v.n != 3:
        raise UsageError("projection needs n = 3")
    g = (v.f[0] + v.f[1]) / 3.0
    omega = numerical_radius(g)
    if omega >= 1.0:
        raise ProjectionFailure(f"numerical radius {omega:.6g} is not below one")
    return build_variety([g], tol)


def pushforward(points: np.ndarray) -> np.ndarray:
    return ((points[:, 0] + points[:, 1]) / 3.0)[:, None]


# --------------------------------------------------------------------------
# von Neumann inequality on the variety


@dataclass
class VNReport:
    worst_slack: float
    slacks: list
    fot_distance: float
    sup_estimates: list = field(default_factory=list)


def _fiber_rows(v: VarietyRep, p: complex) -> np.ndarray:
    pts = fiber_points(v, p)
    return np.hstack([pts, np.full((pts.shape[0], 1), p)])


def _circle_sup(v: VarietyRep, f: polys.Polynomial, thetas: np.ndarray, rows: np.ndarray, refine: int = 3) -> float:
    """Max of ``||f||`` over circle fibers, refined by golden-section search.

    ``rows`` stacks the fibers over ``thetas`` in order, ``order`` rows each.
    """
    vals = polys.value_norms(f, rows).reshape(thetas.size, -1).max(axis=1)
    best = float(vals.max())
    step = thetas[1] - thetas[0]

    def g(theta: float) -> float:
        return float(polys.value_norms(f, _fiber_rows(v, np.exp(1j * theta))).max())

    for k in np.argsort(vals)[::-1][:refine]:
        _, val = golden_max(g, thetas[k] - step, thetas[k] + step)
        best = max(best, val)
    return best


def vn_inequality_check(
    t: GammaTuple,
    v: VarietyRep,
    poly_count: int = 100,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    literal: bool = False,
    grid: tuple = (8, 32),
    circle_samples: int = 720,
    coeff_size: int = 2,
    polynomials: list | None = None,
) -> VNReport:
    """Sampled von Neumann inequality for ``t`` against the variety of ``v``.

    The variety must come from the fundamental tuple of ``t``'s adjoint
    (``literal=True`` uses the fundamental tuple of ``t`` itself), ``t``
    must be pure and that tuple must be valid variety data.  Half of the
    random polynomials have ``coeff_size x coeff_size`` matrix coefficients.
    ``worst_slack`` is the smallest value of ``sup_variety ||f|| - ||f(t)||``.
    """
    if t.n != v.n:
        raise HypothesisViolation("tuple and variety have different n")
    if not is_pure(t.p_op, tol):
        raise HypothesisViolation("tuple is not pure")
    src = t if literal else t.adjoint()
    fot = fundamental_tuple(src, tol)
    check = build_variety(fot.matrices, tol, enforce=False) if fot.rank else None
    if check is None or not check.validity.valid:
        why = check.validity.offending if check is not None else "trivial defect space"
        raise HypothesisViolation(f"fundamental tuple is not valid variety data: {why}")
    dist = (
        max(norm2(x - y) for x, y in zip(fot.matrices, v.f))
        if all(x.shape == y.shape for x, y in zip(fot.matrices, v.f))
        else float("inf")
    )
    if dist > tol * max(1.0, max(norm2(y) for y in v.f)):
        raise HypothesisViolation(f"fundamental tuple differs from variety data by {dist:.3e}", distance=dist)

    rng = np.random.default_rng(seed)
    if polynomials is None:
        polynomials = [
            polys.random_polynomial(rng, t.n, 3, coeff_size=0 if k % 2 == 0 else coeff_size) for k in range(poly_count)
        ]
    grid_rows = trace_points(v, *grid)
    thetas = 2.0 * np.pi * np.arange(circle_samples) / circle_samples
    circle_rows = np.vstack([_fiber_rows(v, np.exp(1j * th)) for th in thetas])
    slacks, sups = [], []
    mats = t.matrices
    for f in polynomials:
        lhs = norm2(polys.evaluate_operator(f, mats))
        sup = max(float(polys.value_norms(f, grid_rows).max()), _circle_sup(v, f, thetas, circle_rows))
        slacks.append(sup - lhs)
        sups.append(sup)
    return VNReport(worst_slack=min(slacks) if slacks else 0.0, slacks=slacks, fot_distance=dist, sup_estimates=sups)
