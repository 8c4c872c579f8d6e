"""Joint spectra of commuting matrix tuples by simultaneous triangularization.

A joint eigenvector is found by taking an eigenspace of the first matrix,
compressing the remaining matrices onto it and recursing.  Rotating that
vector to the first coordinate with a Householder reflection deflates the
problem to the trailing block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NumericalFailure, UsageError
from .matrix_core import adj, as_square, max_commutator_defect, norm2

DEFAULT_COMMUTE_TOL = 1e-8
CLUSTER_GAP = 1e-8


@dataclass(frozen=True)
class CommutingTuple:
    matrices: tuple
    order: int
    arity: int
    commutator_defect: float
    tol: float

    @property
    def scale(self) -> float:
        return max([1.0] + [norm2(m) for m in self.matrices])

    def conjugate(self, u: np.ndarray) -> "CommutingTuple":
        """Return the tuple ``(U* T_i U)``."""
        return commuting_tuple([adj(u) @ m @ u for m in self.matrices], tol=self.tol)


def commuting_tuple(matrices, tol: float = DEFAULT_COMMUTE_TOL) -> CommutingTuple:
    """Validate a list of same-order square matrices as a commuting tuple.

    The commutator defect is compared with ``tol * max(1, max ||T_i||)^2``.
    """
    mats = tuple(as_square(m) for m in matrices)
    if not mats:
        raise UsageError("a commuting tuple needs at least one matrix")
    order = mats[0].shape[0]
    if any(m.shape != (order, order) for m in mats):
        raise UsageError("all matrices in a tuple must share one order")
    if order == 0:
        raise UsageError("matrices must have positive order")
    dfc = max_commutator_defect(mats)
    scale = max([1.0] + [norm2(m) for m in mats])
    if dfc > tol * scale**2:
        raise UsageError(f"commutator defect {dfc:.3e} exceeds tolerance {tol * scale**2:.3e}")
    return CommutingTuple(matrices=mats, order=order, arity=len(mats), commutator_defect=dfc, tol=tol)


@dataclass(frozen=True)
class JointSpectrum:
    """Multiset of joint eigenvalues, one row per point."""

    points: np.ndarray

    @property
    def order(self) -> int:
        return int(self.points.shape[0])

    @property
    def arity(self) -> int:
        return int(self.points.shape[1])


def _lex_key(z: np.ndarray):
    out = []
    for c in np.atleast_1d(z):
        out.extend([round(float(c.real), 12), round(float(c.imag), 12)])
    return tuple(out)


def _eigen_groups(a: np.ndarray, gap: float):
    """Eigenvalues of ``a`` sorted lexicographically and grouped by proximity."""
    eig = sorted(np.linalg.eigvals(a), key=lambda z: (z.real, z.imag))
    groups = []
    for lam in eig:
        for g in groups:
            if abs(lam - np.mean(g)) <= gap:
                g.append(lam)
                break
        else:
            groups.append([lam])
    centres = [complex(np.mean(g)) for g in groups]
    return [(c, len(g)) for c, g in sorted(zip(centres, groups), key=lambda cg: (cg[0].real, cg[0].imag))]


def _near_kernel(a: np.ndarray, lam: complex, mult: int, cut: float) -> np.ndarray:
    """Approximate kernel of ``a - lam I``; always at least one vector."""
    size = a.shape[0]
    _, sv, vh = np.linalg.svd(a - lam * np.eye(size))
    dim = max(1, int(np.sum(sv <= cut)))
    dim = min(dim, mult, size) if mult >= 1 else dim
    return adj(vh[size - dim:, :])


def _residuals(mats, v: np.ndarray):
    lam = np.array([np.vdot(v, m @ v) for m in mats])
    res = np.array([np.linalg.norm(m @ v - l * v) for m, l in zip(mats, lam)])
    return lam, res


def _candidates(mats, scale: float):
    """Yield candidate joint eigenvectors in deterministic order."""
    a = mats[0]
    size = a.shape[0]
    if size == 1:
        yield np.ones(1, dtype=complex)
        return
    gap = CLUSTER_GAP * scale
    cut = max(1e-9 * scale, 64 * np.finfo(float).eps * scale * size)
    for lam, mult in _eigen_groups(a, gap):
        q = _near_kernel(a, lam, mult, cut)
        if q.shape[1] == 1 or len(mats) == 1:
            yield q[:, 0]
            continue
        sub = [adj(q) @ m @ q for m in mats[1:]]
        for w in _candidates(sub, scale):
            v = q @ w
            yield v / np.linalg.norm(v)


def _combined_candidates(mats):
    """Eigenvectors of a fixed generic combination, a fallback search."""
    weights = [1.0 / (k + 1) + 0.37j * k for k in range(len(mats))]
    comb = sum(w * m for w, m in zip(weights, mats))
    _, vecs = np.linalg.eig(comb)
    for k in range(vecs.shape[1]):
        yield vecs[:, k] / np.linalg.norm(vecs[:, k])


def _joint_eigenpair(mats, tol: float, scale: float):
    best = None
    for source in (_candidates(mats, scale), _combined_candidates(mats)):
        passing = []
        for v in source:
            lam, res = _residuals(mats, v)
            r = float(res.max())
            if best is None or r < best[2]:
                best = (lam, v, r)
            if r <= tol:
                passing.append((lam, v))
                # the first passing vector of the ordered search is the lexicographic choice
                break
        if passing:
            return passing[0]
    raise NumericalFailure(
        f"no joint eigenvector within residual {tol:.3e}",
        residuals={"best_residual": best[2] if best else float("inf")},
    )


def _budget(t: CommutingTuple, tol: float | None) -> float:
    if tol is not None:
        return tol
    return 1e-8 * t.scale + 10.0 * t.commutator_defect


def joint_eigenpair(t: CommutingTuple, tol: float | None = None):
    """Joint eigenvalue ``lambda`` and unit vector ``v`` with ``T_i v ~ lambda_i v``.

    Candidates come from eigenspaces of ``T_1`` visited in lexicographic
    order of the eigenvalue; the first one whose residual meets ``tol``
    is returned.
    """
    budget = _budget(t, tol)
    lam, v = _joint_eigenpair(list(t.matrices), budget, t.scale)
    k = int(np.argmax(np.abs(v) >= np.abs(v).max() * (1.0 - 1e-8)))
    return lam, v * (abs(v[k]) / v[k])


def _reflector(v: np.ndarray) -> np.ndarray:
    """Unitary Hermitian ``H`` whose first column is a unit multiple of ``v``."""
    size = v.shape[0]
    if size == 1 or np.linalg.norm(v[1:]) <= 1e-15:
        return np.eye(size, dtype=complex)
    phase = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
    alpha = -phase * np.linalg.norm(v)
    w = v.copy()
    w[0] -= alpha
    w /= np.linalg.norm(w)
    return np.eye(size, dtype=complex) - 2.0 * np.outer(w, w.conj())


def simultaneous_triangularize(t: CommutingTuple, tol: float | None = None):
    """Unitary ``U`` and upper-triangular ``R_i`` with ``U* T_i U ~ R_i``.

    If the first coordinate vector of the current trailing block is already
    a joint eigenvector it is kept, so upper-triangular input comes back
    with ``U = I``.
    """
    budget = _budget(t, tol)
    size = t.order
    cur = [m.copy() for m in t.matrices]
    u = np.eye(size, dtype=complex)
    for k in range(size - 1):
        block = [m[k:, k:] for m in cur]
        e1 = np.zeros(size - k, dtype=complex)
        e1[0] = 1.0
        _, res = _residuals(block, e1)
        if res.max() <= budget:
            continue
        _, v = _joint_eigenpair(block, budget, t.scale)
        h = np.eye(size, dtype=complex)
        h[k:, k:] = _reflector(v)
        cur = [h @ m @ h for m in cur]
        u = u @ h
    lower = max(norm2(np.tril(m, -1)) for m in cur)
    if lower > size * budget:
        raise NumericalFailure(
            f"strictly lower part {lower:.3e} exceeds budget {size * budget:.3e}",
            residuals={"lower_part": lower},
        )
    return u, [np.triu(m) for m in cur]


def taylor_spectrum(t: CommutingTuple, tol: float | None = None) -> JointSpectrum:
    """Joint diagonal coefficients of a simultaneous triangularization."""
    _, tri = simultaneous_triangularize(t, tol)
    pts = np.stack([np.diag(r) for r in tri], axis=1)
    order = sorted(range(pts.shape[0]), key=lambda k: _lex_key(pts[k]))
    return JointSpectrum(points=pts[order])


def match_distance(a, b) -> float:
    """Bottleneck-style distance between two multisets of points.

    Pairs are chosen by an optimal assignment minimising the summed
    max-coordinate distance; the largest matched distance is returned.
    """
    pa = np.atleast_2d(np.asarray(a, dtype=complex))
    pb = np.atleast_2d(np.asarray(b, dtype=complex))
    if pa.shape != pb.shape:
        return float("inf")
    if pa.size == 0:
        return 0.0
    cost = np.max(np.abs(pa[:, None, :] - pb[None, :, :]), axis=2)
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
