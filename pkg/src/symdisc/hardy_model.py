"""Truncated vector-valued Hardy space: dilations and functional models.

Functions ``sum_k z^k xi_k`` with ``xi_k`` in a coefficient space ``E`` of
dimension ``m`` and degree ``<= N`` are stored as stacked coefficient
blocks in ascending degree.  Multiplication by an analytic operator symbol
is then block lower triangular, and compressing a product of such
operators to the first ``N + 1`` blocks equals the product of the
compressions.  All truncation errors therefore come from the dropped tail
of ``W``, bounded by ``||P^{N+1}||``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DilationFailure, EvaluationFailure, ModelFailure, PurityRequired, UsageError
from .gamma_ops import FundamentalTuple, GammaTuple, fundamental_tuple, is_pure
from .matrix_core import DEFAULT_RANK_TOL, adj, as_square, defect, hermitian_part, norm2
from .polys import monomials

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class TruncatedHardy:
    base_dim: int
    degree: int

    @property
    def total_dim(self) -> int:
        return self.base_dim * (self.degree + 1)

    def block(self, k: int) -> slice:
        m = self.base_dim
        return slice(k * m, (k + 1) * m)

    def shift(self) -> np.ndarray:
        """Multiplication by ``z``: block ``k`` to block ``k + 1``."""
        return np.kron(np.eye(self.degree + 1, k=-1), np.eye(self.base_dim)).astype(complex)

    def toeplitz(self, coeffs) -> np.ndarray:
        """Lower block Toeplitz matrix of the symbol ``sum_j z^j C_j``.

        ``coeffs`` lists ``C_0, C_1, ...`` (each ``rows x base_dim``);
        terms beyond the truncation degree are ignored.
        """
        rows = coeffs[0].shape[0]
        out = np.zeros((rows * (self.degree + 1), self.total_dim), dtype=complex)
        for j, c in enumerate(coeffs[: self.degree + 1]):
            out += np.kron(np.eye(self.degree + 1, k=-j), c)
        return out

    def block_projection(self, k: int) -> np.ndarray:
        out = np.zeros((self.total_dim, self.total_dim))
        out[self.block(k), self.block(k)] = np.eye(self.base_dim)
        return out


def default_degree(p: np.ndarray, floor: int = 20, threshold: float = 1e-12, cap: int = 400) -> int:
    """``max(floor, first k with ||P^k|| < threshold)``, capped at ``cap``."""
    power = np.eye(p.shape[0], dtype=complex)
    for k in range(1, cap + 1):
        power = power @ p
        if norm2(power) < threshold:
            return max(floor, k)
    return cap


def _require_pure(p: np.ndarray):
    if not is_pure(p, 0.0):
        raise PurityRequired("P has an eigenvalue on or outside the unit circle")


def characteristic_function(p, z: complex, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """``-P + z D_{P*} (I - z P*)^{-1} D_P`` from defect to adjoint-defect coordinates."""
    p = as_square(p)
    dp, dps = defect(p, rank_tol), defect(adj(p), rank_tol)
    if dp.rank == 0 or dps.rank == 0:
        return np.zeros((dps.rank, dp.rank), dtype=complex)
    res = np.eye(p.shape[0]) - z * adj(p)
    if np.linalg.cond(res) > 1e12:
        raise EvaluationFailure(f"I - zP* is numerically singular at z = {z}")
    full = -p + z * dps.d_matrix @ np.linalg.solve(res, dp.d_matrix)
    return adj(dps.basis) @ full @ dp.basis


def theta_coefficients(p: np.ndarray, count: int, rank_tol: float = DEFAULT_RANK_TOL) -> list:
    """Maclaurin blocks ``-P`` then ``D_{P*} (P*)^{k-1} D_P`` in defect coordinates."""
    dp, dps = defect(p, rank_tol), defect(adj(p), rank_tol)
    e, es = dp.basis, dps.basis
    out = [-adj(es) @ p @ e]
    power = np.eye(p.shape[0], dtype=complex)
    for _ in range(1, count):
        out.append(adj(es) @ dps.d_matrix @ power @ dp.d_matrix @ e)
        power = power @ adj(p)
    return out


def _w_matrix(p: np.ndarray, N: int, rank_tol: float) -> np.ndarray:
    dps = defect(adj(p), rank_tol)
    es = dps.basis
    blocks = []
    power = np.eye(p.shape[0], dtype=complex)
    for _ in range(N + 1):
        blocks.append(adj(es) @ dps.d_matrix @ power)
        power = power @ adj(p)
    return np.vstack(blocks)


def build_w(t: GammaTuple, N: int) -> np.ndarray:
    """The embedding ``h -> sum_k z^k D_{P*} (P*)^k h`` truncated at degree ``N``."""
    _require_pure(t.p_op)
    return _w_matrix(t.p_op, N, t.rank_tol)


@dataclass
class DilationBundle:
    t_ops: list
    v_op: np.ndarray
    w_op: np.ndarray
    tail_bound: float
    space: TruncatedHardy
    fot_adj: FundamentalTuple | None
    residuals: dict = field(default_factory=dict)
    identity: bool = False

    @property
    def tau(self) -> float:
        return max([1.0] + [norm2(m) for m in self.t_ops])


def _tail_bound(p: np.ndarray, N: int, tau: float, dim: int, degree: int = 4) -> float:
    """Truncation estimate ``||P^{N+1}|| max(1, tau)^degree`` plus a round-off floor."""
    growth = max(1.0, tau) ** degree
    tail = norm2(np.linalg.matrix_power(p, N + 1))
    return tail * growth + 64.0 * EPS * dim * growth


def build_dilation(t: GammaTuple, N: int | None = None, tol: float | None = None) -> DilationBundle:
    """Isometric dilation ``T_i = I (x) B_i* + M_z (x) B_{n-i}``, ``V = M_z``.

    ``B`` is the fundamental tuple of the adjoint; ``W`` embeds the source
    space.  When ``P`` is unitary the tuple is its own dilation.
    """
    tol = t.tol if tol is None else tol
    p = t.p_op
    if t.defect_adj.rank == 0 and t.defect.rank == 0:
        eye = np.eye(t.order, dtype=complex)
        space = TruncatedHardy(t.order, 0)
        return DilationBundle(list(t.s_ops), p.copy(), eye, 0.0, space, None, {}, identity=True)
    _require_pure(p)
    N = default_degree(p) if N is None else N
    b = fundamental_tuple(t.adjoint(), tol)
    n = t.n
    space = TruncatedHardy(t.defect_adj.rank, N)
    t_ops = [space.toeplitz([adj(b.f(i)), b.f(n - i)]) for i in range(1, n)]
    v = space.shift()
    w = _w_matrix(p, N, t.rank_tol)
    tau = max([1.0] + [norm2(m) for m in t_ops])
    bound = _tail_bound(p, N, tau, space.total_dim)
    table = {}
    for i in range(1, n):
        table[f"W*T_{i} - S_{i}W*"] = norm2(adj(w) @ t_ops[i - 1] - t.s(i) @ adj(w))
    table["V*W - WP*"] = norm2(adj(v) @ w - w @ adj(p))
    table["W*W - I"] = norm2(adj(w) @ w - np.eye(t.order))
    budget = max(bound, tol)
    bad = {k: r for k, r in table.items() if r > budget}
    if bad:
        raise DilationFailure(f"intertwining residuals exceed {budget:.3e}: {bad}", table)
    return DilationBundle(t_ops, v, w, bound, space, b, table)


@dataclass
class MomentReport:
    max_residual: float
    residuals: dict
    coextension: dict
    tail_bound: float

    @property
    def max_coextension(self) -> float:
        return max(self.coextension.values(), default=0.0)


def verify_dilation_moments(b: DilationBundle, t: GammaTuple, max_total_degree: int = 4) -> MomentReport:
    """``||W* T^m V^k W - S^m P^k||`` for every monomial of bounded total degree.

    Also reports the co-extension residuals ``||T_i* W - W S_i*||`` and
    ``||V* W - W P*||``.
    """
    big = list(b.t_ops) + [b.v_op]
    small = t.matrices
    exps = monomials(len(big), max_total_degree)
    big_tab = {(0,) * len(big): np.eye(big[0].shape[0], dtype=complex)}
    small_tab = {(0,) * len(big): np.eye(t.order, dtype=complex)}
    res = {}
    w = b.w_op
    for e in exps:
        if e not in big_tab:
            j = next(k for k, a in enumerate(e) if a)
            prev = e[:j] + (e[j] - 1,) + e[j + 1 :]
            big_tab[e] = big[j] @ big_tab[prev]
            small_tab[e] = small[j] @ small_tab[prev]
        res[e] = norm2(adj(w) @ big_tab[e] @ w - small_tab[e])
    coext = {}
    for i in range(1, t.n):
        coext[f"T_{i}*W - WS_{i}*"] = norm2(adj(b.t_ops[i - 1]) @ w - w @ adj(t.s(i)))
    coext["V*W - WP*"] = norm2(adj(b.v_op) @ w - w @ adj(t.p_op))
    return MomentReport(max(res.values()), res, coext, b.tail_bound)


def minimality_rank(b: DilationBundle, t: GammaTuple) -> int:
    """Numerical rank of ``span{T^m V^k W h}`` over monomials of degree ``<= N``."""
    big = list(b.t_ops) + [b.v_op]
    vecs = [b.w_op]
    frontier = [b.w_op]
    for _ in range(b.space.degree):
        frontier = [m @ f for f in frontier for m in big]
        # keep the frontier small by orthonormalising its span
        q, r = np.linalg.qr(np.hstack(frontier))
        keep = np.abs(np.diag(r)) > 1e-10 if r.size else []
        frontier = [q[:, keep]] if np.any(keep) else []
        vecs.extend(frontier)
        if not frontier:
            break
    sv = np.linalg.svd(np.hstack(vecs), compute_uv=False)
    return int(np.sum(sv > 1e-8 * sv[0]))


@dataclass
class L0Report:
    residual: float
    band: int
    kernel_residual: float


def _disc_samples(count: int, radius: float = 0.95) -> np.ndarray:
    """``z = 0`` followed by a golden-angle spiral inside the disc."""
    if count <= 1:
        return np.zeros(1, dtype=complex)
    k = np.arange(count - 1)
    r = radius * np.sqrt((k + 0.5) / (count - 1))
    return np.concatenate([[0.0], r * np.exp(2j * np.pi * 0.6180339887498949 * k)])


def theta_multiplication(p: np.ndarray, N: int, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Block lower triangular matrix of ``M_Theta`` on degrees ``0..N``."""
    dp = defect(p, rank_tol)
    coeffs = theta_coefficients(p, N + 1, rank_tol)
    return TruncatedHardy(dp.rank, N).toeplitz(coeffs)


def verify_l0(p, N: int, z_samples: int = 16, rank_tol: float = DEFAULT_RANK_TOL) -> L0Report:
    """Residual of ``W W* + M_Theta M_Theta* = I`` on the truncated space.

    Every Maclaurin block up to degree ``N`` is retained, so the compressed
    identity holds exactly and the excluded band has width zero.  The
    pointwise kernel identity
    ``I - Theta(w) Theta(z)* = (1 - w conj z) D_{P*}(I - wP*)^{-1}(I - conj(z) P)^{-1} D_{P*}``
    is also checked on sample pairs.
    """
    p = as_square(p)
    _require_pure(p)
    dps = defect(adj(p), rank_tol)
    w = _w_matrix(p, N, rank_tol)
    m = theta_multiplication(p, N, rank_tol)
    eye = np.eye(w.shape[0])
    resid = norm2(w @ adj(w) + m @ adj(m) - eye) if w.size else 0.0

    zs = _disc_samples(z_samples, 0.9)
    kern = 0.0
    es, ds = dps.basis, dps.d_matrix
    size = p.shape[0]
    for a, zz in enumerate(zs):
        wz = zs[(a * 7 + 3) % len(zs)]
        tz, tw = characteristic_function(p, zz, rank_tol), characteristic_function(p, wz, rank_tol)
        lhs = np.eye(dps.rank) - tw @ adj(tz)
        mid = np.linalg.solve(np.eye(size) - wz * adj(p), np.linalg.solve(np.eye(size) - np.conj(zz) * p, ds @ es))
        rhs = (1.0 - wz * np.conj(zz)) * adj(es) @ ds @ mid
        kern = max(kern, norm2(lhs - rhs))
    return L0Report(resid, 0, kern)


@dataclass
class ModelResult:
    r_ops: list
    r_p: np.ndarray
    u: np.ndarray
    residual: float
    tail_bound: float
    projection_rank: int


def model_compression(t: GammaTuple, N: int | None = None, tol: float | None = None) -> ModelResult:
    """Compress the dilation to the complement of ``range(M_Theta)``.

    The model space is spanned by eigenvectors of ``M_Theta M_Theta*`` with
    eigenvalue below one half; ``U = Q* W`` carries the source onto it and
    the residual measures ``||U S_i - R_i U||`` and ``||U P - R U||``.
    """
    tol = t.tol if tol is None else tol
    p = t.p_op
    _require_pure(p)
    N = default_degree(p) if N is None else N
    bundle = build_dilation(t, N, tol)
    m = theta_multiplication(p, N, t.rank_tol)
    big = bundle.space.total_dim
    if m.size:
        lam, vec = np.linalg.eigh(hermitian_part(m @ adj(m)))
        q = vec[:, lam < 0.5]
    else:
        q = np.eye(big, dtype=complex)
    if q.shape[1] != t.order:
        raise ModelFailure(f"model space has dimension {q.shape[1]}, expected {t.order}")
    r_ops = [adj(q) @ x @ q for x in bundle.t_ops]
    r_p = adj(q) @ bundle.v_op @ q
    u = adj(q) @ bundle.w_op
    res = max([norm2(u @ t.s(i) - r_ops[i - 1] @ u) for i in range(1, t.n)] + [norm2(u @ p - r_p @ u)])
    res = max(res, norm2(adj(u) @ u - np.eye(t.order)))
    return ModelResult(r_ops, r_p, u, res, bundle.tail_bound, q.shape[1])


@dataclass
class AdmissibilityReport:
    forward: list
    dual: list

    @property
    def worst(self) -> float:
        return max(self.forward + self.dual, default=0.0)


def verify_admissibility(a: FundamentalTuple, b: FundamentalTuple, p, z_samples: int = 32, rank_tol: float = DEFAULT_RANK_TOL) -> AdmissibilityReport:
    """Intertwining of the characteristic functions by the two pencils.

    ``forward[i]`` is the largest sampled
    ``||(B_i* + B_{n-i} z) Theta_P(z) - Theta_P(z)(A_i + A_{n-i}* z)||``
    and ``dual[i]`` the analogue with ``Theta_{P*}``.
    """
    p = as_square(p)
    n = len(a.matrices) + 1
    zs = _disc_samples(z_samples)
    fwd = [0.0] * (n - 1)
    dual = [0.0] * (n - 1)
    for z in zs:
        th = characteristic_function(p, z, rank_tol)
        th_adj = characteristic_function(adj(p), z, rank_tol)
        for i in range(1, n):
            ai, ani, bi, bni = a.f(i), a.f(n - i), b.f(i), b.f(n - i)
            lhs = (adj(bi) + bni * z) @ th - th @ (ai + adj(ani) * z)
            fwd[i - 1] = max(fwd[i - 1], norm2(lhs))
            lhs = (adj(ai) + ani * z) @ th_adj - th_adj @ (bi + adj(bni) * z)
            dual[i - 1] = max(dual[i - 1], norm2(lhs))
    return AdmissibilityReport(fwd, dual)


@dataclass
class EquivalenceReport:
    ok: bool
    theta_residual: float
    fot_residuals: list


def _check_unitary(u: np.ndarray, tol: float, name: str):
    if u.shape[0] != u.shape[1] or (u.size and norm2(adj(u) @ u - np.eye(u.shape[0])) > tol):
        raise UsageError(f"{name} is not unitary within {tol:g}")


def verify_equivalence_certificate(u, u_star, p, p2, b: FundamentalTuple, b2: FundamentalTuple, z_samples: int = 16, tol: float = 1e-8, rank_tol: float = DEFAULT_RANK_TOL) -> EquivalenceReport:
    """Check a claimed coincidence ``(u, u_star)`` of two characteristic functions.

    Verifies ``u_star Theta_P(z) = Theta_{P'}(z) u`` on samples and
    ``u_star B_i = B'_i u_star``.  Nothing is searched for.
    """
    u, u_star = np.asarray(u, dtype=complex), np.asarray(u_star, dtype=complex)
    _check_unitary(u, tol, "u")
    _check_unitary(u_star, tol, "u_star")
    p, p2 = as_square(p), as_square(p2)
    theta = 0.0
    for z in _disc_samples(z_samples):
        t1 = characteristic_function(p, z, rank_tol)
        t2 = characteristic_function(p2, z, rank_tol)
        if t1.shape != (u_star.shape[0], u.shape[0]) or t2.shape != t1.shape:
            return EquivalenceReport(False, float("inf"), [])
        theta = max(theta, norm2(u_star @ t1 - t2 @ u))
    fres = []
    for x, y in zip(b.matrices, b2.matrices):
        if x.shape != y.shape or x.shape[0] != u_star.shape[0]:
            return EquivalenceReport(False, theta, [float("inf")])
        fres.append(norm2(u_star @ x - y @ u_star))
    ok = theta <= tol and all(r <= tol for r in fres) and len(b.matrices) == len(b2.matrices)
    return EquivalenceReport(ok, theta, fres)


def induced_defect_unitaries(v: np.ndarray, t: GammaTuple, t2: GammaTuple):
    """Defect-space unitaries induced by ``t2 = V t V*``."""
    u = adj(t2.defect.basis) @ v @ t.defect.basis
    u_star = adj(t2.defect_adj.basis) @ v @ t.defect_adj.basis
    return u, u_star
