"""Dense complex matrix primitives.

Every operator in the library is a two-dimensional ``complex128`` numpy
array.  This module supplies norms, the Hermitian spectral calculus used
for defect operators, and the numerical radius.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from .errors import NotAContraction, UsageError

DEFAULT_RANK_TOL = 1e-10
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def as_cmatrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array (scalars become 1x1)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise UsageError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise UsageError("matrix has non-finite entries")
    return m


def as_square(a) -> np.ndarray:
    m = as_cmatrix(a)
    if m.shape[0] != m.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {m.shape}")
    return m


def adj(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def norm2(a: np.ndarray) -> float:
    """Spectral norm that treats empty blocks as zero."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def op_norm(a) -> float:
    """Largest singular value of ``a``.

    Raises
    ------
    UsageError
        If ``a`` has a zero dimension.
    """
    m = as_cmatrix(a)
    if m.size == 0:
        raise UsageError("operator norm of an empty matrix is undefined")
    return norm2(m)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def max_commutator_defect(mats) -> float:
    """Largest ``op_norm([A, B])`` over all pairs in ``mats``."""
    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            worst = max(worst, norm2(commutator(mats[i], mats[j])))
    return worst


def is_normal(a: np.ndarray, tol: float = 1e-10) -> bool:
    scale = max(1.0, norm2(a)) ** 2
    return norm2(adj(a) @ a - a @ adj(a)) <= tol * scale


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + adj(a))


def hermitian_min_eig(a) -> float:
    """Smallest eigenvalue of the Hermitian part ``(a + a*)/2``."""
    m = as_square(a)
    return float(np.linalg.eigvalsh(hermitian_part(m))[0])


def asymmetry_defect(a) -> float:
    """``op_norm(a - a*)/2``, the part discarded by ``hermitian_min_eig``."""
    m = as_square(a)
    return 0.5 * norm2(m - adj(m))


def _lambda_max(a: np.ndarray, theta: float) -> float:
    w = np.exp(1j * theta)
    return float(np.linalg.eigvalsh(0.5 * (w * a + np.conj(w) * adj(a)))[-1])


def golden_max(fun, lo: float, hi: float, width: float = 1e-10, max_iter: int = 200):
    """Golden-section search for a local maximum of ``fun`` on [lo, hi]."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    it = 0
    while hi - lo > width and it < max_iter:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = fun(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = fun(x1)
        it += 1
    if f1 >= f2:
        return x1, f1
    return x2, f2


def numerical_radius(a, angular_samples: int = 256, refine: int = 3) -> float:
    """Numerical radius ``max |<Ax, x>|`` over unit vectors.

    The angle sweep evaluates the top eigenvalue of ``Re(e^{i theta} A)``
    on a uniform grid and then refines the ``refine`` best grid points by
    golden-section search inside their neighbouring cells.
    """
    m = as_square(a)
    if angular_samples < 8:
        raise UsageError("angular_samples must be at least 8")
    if not np.any(m):
        return 0.0
    thetas = 2.0 * np.pi * np.arange(angular_samples) / angular_samples
    vals = np.array([_lambda_max(m, t) for t in thetas])
    best = float(vals.max())
    step = thetas[1] - thetas[0]
    for k in np.argsort(vals)[::-1][:refine]:
        _, v = golden_max(lambda t: _lambda_max(m, t), thetas[k] - step, thetas[k] + step)
        best = max(best, v)
    return max(best, 0.0)


@dataclass(frozen=True)
class DefectData:
    """Defect operator ``D = (I - P*P)^{1/2}`` with a basis of its range."""

    d_matrix: np.ndarray
    basis: np.ndarray
    rank: int

    @property
    def compressed(self) -> np.ndarray:
        """``D`` written in its own basis, an invertible ``rank x rank`` matrix."""
        return adj(self.basis) @ self.d_matrix @ self.basis


def canonical_range_basis(proj: np.ndarray, rank: int) -> np.ndarray:
    """Orthonormal basis of the range of an orthogonal projector.

    Columns are chosen by pivoted Gram-Schmidt on the projector's columns.
    Since the projector does not depend on how its eigenvectors were
    normalised, the result is reproducible, and a range spanned by
    coordinate vectors gets exactly those vectors back.
    """
    m = proj.shape[0]
    cols = proj.astype(complex).copy()
    out = np.zeros((m, rank), dtype=complex)
    for k in range(rank):
        norms = np.linalg.norm(cols, axis=0)
        top = norms.max()
        j = int(np.flatnonzero(norms >= top * (1.0 - 1e-8))[0])
        q = cols[:, j] / norms[j]
        for _ in range(2):
            q = q - out[:, :k] @ (adj(out[:, :k]) @ q)
            q = q / np.linalg.norm(q)
        out[:, k] = q
        cols = cols - np.outer(q, q.conj() @ cols)
    return out


def defect(p, rank_tol: float = DEFAULT_RANK_TOL) -> DefectData:
    """Defect operator of a contraction.

    Eigenvalues of ``I - P*P`` not exceeding ``rank_tol`` are set to zero,
    so ``D`` vanishes off the range basis exactly and ``D^2`` matches
    ``I - P*P`` to within ``rank_tol``.
    """
    m = as_square(p)
    size = m.shape[0]
    if norm2(m) > 1.0 + rank_tol:
        raise NotAContraction(f"op_norm(P) = {norm2(m):.17g} exceeds 1 + {rank_tol:g}")
    lam, vec = np.linalg.eigh(hermitian_part(np.eye(size) - adj(m) @ m))
    keep = lam > rank_tol
    # eigenvalues at or below rank_tol are round-off of an exact zero; a square
    # root would inflate them to ~sqrt(rank_tol) outside the range basis
    lam = np.where(keep, lam, 0.0)
    d = hermitian_part((vec * np.sqrt(lam)) @ adj(vec))
    rank = int(keep.sum())
    vr = vec[:, keep]
    basis = canonical_range_basis(vr @ adj(vr), rank)
    return DefectData(d_matrix=d, basis=basis, rank=rank)


def spectral_radius(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def random_unitary(rng: np.random.Generator, order: int) -> np.ndarray:
    """Haar-distributed unitary drawn from ``rng``."""
    if order == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return np.asarray(unitary_group.rvs(order, random_state=rng), dtype=complex)
