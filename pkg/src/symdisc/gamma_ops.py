"""Operator tuples ``(S_1, ..., S_{n-1}, P)`` over the symmetrized polydisc.

Covers the defect equation and its solution (the fundamental tuple), the
identity suite relating a tuple to its adjoint, graded contractivity
checks, classification, a pure-tuple generator and the map to ``n = 2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import polys
from .errors import InvalidFundamentalData, NotRepresentable, UsageError
from .joint_spectrum import commuting_tuple, taylor_spectrum
from .matrix_core import (
    DEFAULT_RANK_TOL,
    DefectData,
    adj,
    as_square,
    commutator,
    defect,
    hermitian_part,
    is_normal,
    max_commutator_defect,
    norm2,
    numerical_radius,
)
from .polydisc_geometry import (
    Region,
    SymPoint,
    classify_coords,
    polar_grid,
    symmetrize_rows,
)

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class GammaTuple:
    n: int
    s_ops: tuple
    p_op: np.ndarray
    defect: DefectData
    defect_adj: DefectData
    tol: float = DEFAULT_TOL
    rank_tol: float = DEFAULT_RANK_TOL

    @property
    def order(self) -> int:
        return self.p_op.shape[0]

    @property
    def matrices(self) -> list:
        return list(self.s_ops) + [self.p_op]

    @property
    def scale(self) -> float:
        return max([1.0] + [norm2(m) for m in self.matrices])

    def s(self, i: int) -> np.ndarray:
        """``S_i`` with the one-based index used throughout."""
        return self.s_ops[i - 1]

    def adjoint(self) -> "GammaTuple":
        return GammaTuple(
            n=self.n,
            s_ops=tuple(adj(m) for m in self.s_ops),
            p_op=adj(self.p_op),
            defect=self.defect_adj,
            defect_adj=self.defect,
            tol=self.tol,
            rank_tol=self.rank_tol,
        )

    def conjugate(self, u: np.ndarray) -> "GammaTuple":
        """``(U* S_i U, U* P U)``."""
        return gamma_tuple([adj(u) @ m @ u for m in self.s_ops], adj(u) @ self.p_op @ u, self.tol, self.rank_tol)


def gamma_tuple(s_ops, p, tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL) -> GammaTuple:
    """Validate and package ``(S_1, ..., S_{n-1}, P)``.

    Matrices must share one order and commute within
    ``tol * max(1, max norm)^2``; ``P`` must be a contraction.
    """
    s_ops = tuple(as_square(m) for m in s_ops)
    p = as_square(p)
    if not s_ops:
        raise UsageError("need at least one S matrix (n >= 2)")
    if any(m.shape != p.shape for m in s_ops):
        raise UsageError("all matrices must have the order of P")
    mats = list(s_ops) + [p]
    scale = max([1.0] + [norm2(m) for m in mats])
    dfc = max_commutator_defect(mats)
    if dfc > tol * scale**2:
        raise UsageError(f"tuple does not commute: defect {dfc:.3e}")
    return GammaTuple(
        n=len(s_ops) + 1,
        s_ops=s_ops,
        p_op=p,
        defect=defect(p, rank_tol),
        defect_adj=defect(adj(p), rank_tol),
        tol=tol,
        rank_tol=rank_tol,
    )


def scalar_tuple(point: SymPoint, order: int = 1) -> GammaTuple:
    """``(s_1 I, ..., s_{n-1} I, p I)``."""
    eye = np.eye(order, dtype=complex)
    return gamma_tuple([c * eye for c in point.s], point.p * eye)


def diagonal_tuple(points) -> GammaTuple:
    """Diagonal tuple whose joint eigenvalues are the given coordinate rows."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    mats = [np.diag(pts[:, j]) for j in range(pts.shape[1])]
    return gamma_tuple(mats[:-1], mats[-1])


# --------------------------------------------------------------------------
# fundamental operator tuples


@dataclass(frozen=True)
class FundamentalTuple:
    """Solution of ``S_i - S_{n-i}* P = D F_i D`` in defect coordinates."""

    matrices: tuple
    residuals: tuple
    basis: np.ndarray

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def f(self, i: int) -> np.ndarray:
        return self.matrices[i - 1]

    def lifted(self, i: int) -> np.ndarray:
        """``F_i`` as an operator on the whole space, zero off the defect range."""
        e = self.basis
        return e @ self.matrices[i - 1] @ adj(e)


def defect_rhs(t: GammaTuple, i: int) -> np.ndarray:
    """``S_i - S_{n-i}* P``."""
    return t.s(i) - adj(t.s(t.n - i)) @ t.p_op


def fundamental_tuple(t: GammaTuple, tol: float | None = None) -> FundamentalTuple:
    """Fundamental tuple by pseudo-inversion of ``D_P`` on its range.

    Raises
    ------
    NotRepresentable
        If some residual ``||S_i - S_{n-i}* P - D F_i D||`` exceeds
        ``tol * max(1, scale)``.
    """
    tol = t.tol if tol is None else tol
    e = t.defect.basis
    d = t.defect.d_matrix
    dc = t.defect.compressed
    dinv = np.linalg.inv(dc) if dc.size else dc
    mats, res = [], []
    for i in range(1, t.n):
        x = defect_rhs(t, i)
        f = dinv @ adj(e) @ x @ e @ dinv
        mats.append(f)
        res.append(norm2(x - d @ e @ f @ adj(e) @ d))
    bound = tol * t.scale
    if max(res) > bound:
        raise NotRepresentable(f"defect equation residual {max(res):.3e} exceeds {bound:.3e}", residuals=res)
    return FundamentalTuple(matrices=tuple(mats), residuals=tuple(res), basis=e)


def verify_tetra(t: GammaTuple, f: FundamentalTuple) -> list:
    """Residuals ``||D S_i - F_i D - F_{n-i}* D P||`` for ``i = 1..n-1``."""
    d = t.defect.d_matrix
    out = []
    for i in range(1, t.n):
        lhs = d @ t.s(i)
        rhs = f.lifted(i) @ d + adj(f.lifted(t.n - i)) @ d @ t.p_op
        out.append(norm2(lhs - rhs))
    return out


def fot_radius_bound(f: FundamentalTuple, n: int, samples: int = 64, angular: int = 64) -> float:
    """Largest ``omega(F_i + F_{n-i} z)`` over ``samples`` points of the circle."""
    if f.rank == 0:
        return 0.0
    zs = np.exp(2j * np.pi * np.arange(samples) / samples)
    worst = 0.0
    for i in range(1, n):
        for z in zs:
            worst = max(worst, numerical_radius(f.f(i) + f.f(n - i) * z, angular_samples=angular, refine=1))
    return worst


@dataclass
class IdentityCheck:
    identity: str
    index: int
    residual: float | None
    status: str  # "Pass", "Fail" or "Skipped"
    note: str = ""


@dataclass
class IdentityReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status != "Fail" for c in self.checks)

    def worst(self, identity: str | None = None) -> float:
        vals = [c.residual for c in self.checks if c.residual is not None and identity in (None, c.identity)]
        return max(vals) if vals else 0.0

    def statuses(self, identity: str) -> list:
        return [c.status for c in self.checks if c.identity == identity]

    def as_rows(self) -> list:
        return [
            {"identity": c.identity, "i": c.index, "residual": c.residual, "status": c.status, "note": c.note}
            for c in self.checks
        ]


def verify_fot_identities(t: GammaTuple, a: FundamentalTuple, b: FundamentalTuple, tol: float | None = None) -> IdentityReport:
    """Residuals of the identities tying the fundamental tuples of ``t`` and ``t*``.

    ``a`` belongs to ``t`` and ``b`` to ``t.adjoint()``.  Identities whose
    hypotheses fail (commuting ``a`` pairs, dense range of ``P``) are
    reported as ``Skipped``.
    """
    tol = t.tol if tol is None else tol
    n, p = t.n, t.p_op
    d, ds = t.defect.d_matrix, t.defect_adj.d_matrix
    e, es = a.basis, b.basis
    rep = IdentityReport()

    def add(name, i, val, note=""):
        rep.checks.append(IdentityCheck(name, i, float(val), "Pass" if val <= tol * t.scale**2 else "Fail", note))

    def skip(name, i, note):
        rep.checks.append(IdentityCheck(name, i, None, "Skipped", note))

    comm_a = max((norm2(commutator(a.f(i), a.f(n - i))) for i in range(1, n)), default=0.0)
    a_commutes = comm_a <= tol * max(1.0, max((norm2(m) for m in a.matrices), default=1.0)) ** 2
    sv = np.linalg.svd(p, compute_uv=False)
    dense_range = sv.min() > tol

    for i in range(1, n):
        ai, ani = a.f(i), a.f(n - i)
        bi, bni = b.f(i), b.f(n - i)
        si, sni = t.s(i), t.s(n - i)

        if a_commutes:
            lhs = adj(si) @ si - adj(sni) @ sni
            mid = e @ (adj(ai) @ ai - adj(ani) @ ani) @ adj(e)
            add("norm_difference", i, norm2(lhs - d @ mid @ d))
        else:
            skip("norm_difference", i, f"[A_i, A_n-i] = {comm_a:.3e}")

        lhs = d @ e @ ai
        rhs = (si @ d - ds @ es @ bni @ adj(es) @ p) @ e
        add("defect_intertwine", i, norm2(lhs - rhs))

        lhs = p @ e @ ai
        rhs = es @ adj(bi) @ adj(es) @ p @ e
        add("shift_intertwine", i, norm2(lhs - rhs))

        lhs = e @ adj(ai) @ adj(e) @ d @ ds @ es - e @ ani @ adj(e) @ adj(p) @ es
        rhs = d @ ds @ es @ bi - adj(p) @ es @ adj(bni)
        add("adjoint_cross", i, norm2(lhs - rhs))

        if a_commutes and dense_range:
            add("self_commutator.1", i, norm2(commutator(adj(ai), ai) - commutator(adj(ani), ani)))
            add("self_commutator.2", i, norm2(commutator(bi, bni)))
            add("self_commutator.3", i, norm2(commutator(adj(bi), bi) - commutator(adj(bni), bni)))
        else:
            why = "range of P not dense" if not dense_range else "A_i, A_n-i do not commute"
            for name in ("self_commutator.1", "self_commutator.2", "self_commutator.3"):
                skip(name, i, why)
    return rep


# --------------------------------------------------------------------------
# pencils and contractivity


def scaled_tuple(mats, alpha: complex) -> list:
    """``(alpha T_1, alpha^2 T_2, ..., alpha^k T_k)``."""
    return [alpha ** (j + 1) * m for j, m in enumerate(mats)]


def phi_operator(t: GammaTuple, i: int, alpha: complex = 1.0) -> np.ndarray:
    """Hermitian pencil operator evaluated at the ``alpha``-scaled tuple."""
    if abs(alpha) > 1.0 + 1e-12:
        raise UsageError("alpha must lie in the closed unit disc")
    n = t.n
    if not 1 <= i <= n - 1:
        raise UsageError(f"index i must lie in 1..{n - 1}")
    sc = scaled_tuple(t.matrices, alpha)
    si, sni, p = sc[i - 1], sc[n - i - 1], sc[-1]
    eye = np.eye(t.order)
    out = (
        n * n * (eye - adj(p) @ p)
        + (adj(si) @ si - adj(sni) @ sni)
        - n * (si - adj(sni) @ p)
        - n * (adj(si) - adj(p) @ sni)
    )
    return hermitian_part(out)


def torus_sup(f: polys.Polynomial, n: int, rng: np.random.Generator, cloud: int = 100_000, refine: int = 3):
    """Lower bound for ``sup |f|`` on the closed set, from torus samples.

    The maximum modulus over the closed set is attained on the image of
    the torus, so samples there are refined by Nelder-Mead over the angles.
    """
    theta = 2.0 * np.pi * rng.random((cloud, n))

    def norms(th):
        return polys.value_norms(f, symmetrize_rows(np.exp(1j * np.atleast_2d(th))))

    vals = norms(theta)
    best = float(vals.max())
    for k in np.argsort(vals)[::-1][:refine]:
        res = minimize(lambda th: -norms(th)[0], theta[k], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-13})
        best = max(best, -float(res.fun))
    return best


def _is_normal_commuting(mats, tol: float) -> bool:
    scale = max([1.0] + [norm2(m) for m in mats])
    return all(is_normal(m, tol) for m in mats) and max_commutator_defect(mats) <= tol * scale**2


@dataclass
class ContractionReport:
    spectrum_ok: bool
    spectrum_outside: int
    phi_ok: bool
    phi_worst: float
    vn_ok: bool
    vn_worst: float
    exact: bool

    @property
    def passed(self) -> bool:
        return self.spectrum_ok and self.phi_ok and self.vn_ok

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "exact": self.exact,
            "spectrum_ok": self.spectrum_ok,
            "spectrum_outside": self.spectrum_outside,
            "phi_ok": self.phi_ok,
            "phi_worst": self.phi_worst,
            "vn_ok": self.vn_ok,
            "vn_worst_excess": self.vn_worst,
        }


def spectrum_in_gamma(mats, spectral_tol: float = 1e-6) -> int:
    """Number of joint eigenvalues of ``mats`` outside the closed set."""
    js = taylor_spectrum(commuting_tuple(mats, tol=1e-6))
    return sum(classify_coords(pt, spectral_tol) is Region.Outside for pt in js.points)


def check_gamma_contraction(
    t: GammaTuple,
    poly_samples: int = 20,
    seed: int = 0,
    tol: float | None = None,
    grid: tuple = (16, 64),
    cloud: int = 100_000,
    spectral_tol: float = 1e-6,
) -> ContractionReport:
    """Three graded tests: joint spectrum, pencil positivity, sampled von Neumann.

    For a commuting tuple of normal matrices the spectral test is exact and
    decides the verdict alone.  Otherwise each stage is necessary and the
    sampled inequality can only falsify.
    """
    tol = t.tol if tol is None else tol
    mats = t.matrices
    outside = spectrum_in_gamma(mats, spectral_tol)
    exact = _is_normal_commuting(mats, 1e-10)
    if exact:
        ok = outside == 0
        return ContractionReport(ok, outside, ok, 0.0, ok, 0.0, True)

    alphas = polar_grid(*grid)
    phi_worst = min(
        float(np.linalg.eigvalsh(phi_operator(t, i, a))[0]) for i in range(1, t.n) for a in alphas
    )
    phi_ok = phi_worst >= -tol * t.scale**2

    rng = np.random.default_rng(seed)
    vn_worst = -np.inf
    for k in range(poly_samples):
        f = polys.random_polynomial(rng, t.n, 3, coeff_size=0 if k % 2 == 0 else 2)
        lhs = norm2(polys.evaluate_operator(f, mats))
        sup = torus_sup(f, t.n, rng, cloud)
        vn_worst = max(vn_worst, lhs - sup - tol * max(1.0, sup))
    vn_ok = poly_samples == 0 or vn_worst <= 0.0
    return ContractionReport(outside == 0, outside, phi_ok, phi_worst, vn_ok, float(max(vn_worst, -np.inf)), False)


class TupleKind(enum.Enum):
    GammaUnitary = "GammaUnitary"
    GammaIsometry = "GammaIsometry"
    PureGammaIsometry = "PureGammaIsometry"
    GammaContraction = "GammaContraction"
    NotGamma = "NotGamma"


@dataclass(frozen=True)
class TupleClass:
    kind: TupleKind
    pure: bool


def is_pure(p: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """All eigenvalues strictly inside the unit circle."""
    return bool(np.max(np.abs(np.linalg.eigvals(p))) < 1.0 - tol)


def classify_tuple(t: GammaTuple, tol: float | None = None, poly_samples: int = 6, seed: int = 0) -> TupleClass:
    """Unitary, isometry, pure isometry, plain contraction or none of these."""
    tol = t.tol if tol is None else tol
    n, p = t.n, t.p_op
    eye = np.eye(t.order)
    iso = norm2(adj(p) @ p - eye) <= tol
    coiso = norm2(p @ adj(p) - eye) <= tol
    rel = max(norm2(defect_rhs(t, i)) for i in range(1, n)) <= tol * t.scale
    pure = is_pure(p, tol)
    if iso and rel and _scaled_ok(t, tol, poly_samples, seed):
        if coiso:
            return TupleClass(TupleKind.GammaUnitary, pure)
        return TupleClass(TupleKind.PureGammaIsometry if pure else TupleKind.GammaIsometry, pure)
    if check_gamma_contraction(t, poly_samples=poly_samples, seed=seed, tol=tol, cloud=20_000).passed:
        return TupleClass(TupleKind.GammaContraction, pure)
    return TupleClass(TupleKind.NotGamma, pure)


def _scaled_ok(t: GammaTuple, tol: float, poly_samples: int, seed: int) -> bool:
    n = t.n
    sc = [t.s(i) * (n - i) / n for i in range(1, n)]
    if n == 2:
        return norm2(sc[0]) <= 1.0 + tol
    sub = gamma_tuple(sc[:-1], sc[-1], tol=max(tol, 1e-8), rank_tol=max(t.rank_tol, tol))
    return check_gamma_contraction(sub, poly_samples=poly_samples, seed=seed, tol=tol, cloud=20_000).passed


# --------------------------------------------------------------------------
# generators and maps


def validate_fundamental_data(f, circle_samples: int = 64, tol: float = 1e-10) -> np.ndarray:
    """Check that ``f`` is a commuting normal tuple with admissible pencils.

    Returns the joint eigenvalues of ``f`` (one row per point).  The pencil
    tuple ``((n-i)/n (F_i* + F_{n-i} z))_i`` is tested on ``circle_samples``
    points of the circle through its joint spectrum, which is exact for
    commuting normal matrices.
    """
    mats = [as_square(m) for m in f]
    n = len(mats) + 1
    if not _is_normal_commuting(mats, tol):
        raise InvalidFundamentalData("generator input must be commuting normal matrices")
    lam = taylor_spectrum(commuting_tuple(mats)).points
    weights = (n - np.arange(1, n)) / n
    zs = np.exp(2j * np.pi * np.arange(circle_samples) / circle_samples)
    for z in zs:
        pencil = weights * (np.conj(lam) + z * lam[:, ::-1])
        for row in pencil:
            if classify_coords(row, 1e-9) is Region.Outside:
                raise InvalidFundamentalData(f"pencil point {row} at z = {z:.4f} lies outside")
    return lam


def generate_pure(f, N: int, tol: float = DEFAULT_TOL) -> GammaTuple:
    """Pure tuple on polynomials of degree ``<= N`` with coefficients in ``C^d``.

    ``S_i`` is block lower bidiagonal with diagonal ``F_i*`` and subdiagonal
    ``F_{n-i}``; ``P`` is the block shift.  The adjoint's fundamental tuple
    is ``f`` on the degree-zero block.
    """
    mats = [as_square(m) for m in f]
    if N < 1:
        raise UsageError("N must be at least 1")
    validate_fundamental_data(mats)
    n = len(mats) + 1
    d = mats[0].shape[0]
    shift = np.kron(np.eye(N + 1, k=-1), np.eye(d))
    diag = np.eye(N + 1)
    s_ops = [np.kron(diag, adj(mats[i - 1])) + np.kron(np.eye(N + 1, k=-1), mats[n - i - 1]) for i in range(1, n)]
    return gamma_tuple(s_ops, shift.astype(complex), tol=tol)


def gamma3_to_gamma2(t: GammaTuple, omega: complex = 1.0) -> GammaTuple:
    """``(S_1/3 + omega S_2/3, omega P)`` for a tuple with ``n = 3``."""
    if t.n != 3:
        raise UsageError("gamma3_to_gamma2 needs n = 3")
    if abs(abs(omega) - 1.0) > 1e-12:
        raise UsageError("omega must be unimodular")
    return gamma_tuple([(t.s(1) + omega * t.s(2)) / 3.0], omega * t.p_op, tol=t.tol, rank_tol=t.rank_tol)
