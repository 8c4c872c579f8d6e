"""Seeded generators for test tuples, varieties and points.

Every generator takes a ``numpy.random.Generator``; ``rng_for`` derives
independent streams from ``(seed, tag, index)`` with the counter-based
Philox bit generator so that results do not depend on call order.
"""

from __future__ import annotations

import zlib

import numpy as np

from .gamma_ops import GammaTuple, diagonal_tuple, gamma_tuple, generate_pure
from .matrix_core import adj, norm2, random_unitary
from .polydisc_geometry import random_polydisc, symmetrize_rows
from .variety import VarietyRep, build_variety


def rng_for(seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Independent generator keyed by ``(seed, tag, index)``."""
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(zlib.crc32(tag.encode()), int(index)))
    return np.random.Generator(np.random.Philox(ss))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def planted_triangular_family(rng: np.random.Generator, order: int, arity: int):
    """Commuting tuple ``Q R_j Q*`` with ``R_j`` polynomials in one triangular matrix.

    Returns the matrices and the planted joint eigenvalues (one row each).
    """
    diag = random_polydisc(rng, 1, order)[:, 0]
    base = np.diag(diag) + np.triu(complex_normal(rng, (order, order)), 1) * (0.5 / np.sqrt(order))
    q = random_unitary(rng, order)
    mats, planted = [], []
    for _ in range(arity):
        c = complex_normal(rng, 3)
        r = c[0] * np.eye(order) + c[1] * base + c[2] * 0.5 * base @ base
        mats.append(q @ r @ adj(q))
        planted.append(c[0] + c[1] * diag + c[2] * 0.5 * diag**2)
    return mats, np.stack(planted, axis=1)


def interior_points(rng: np.random.Generator, dim: int, count: int, radius: float = 0.9) -> np.ndarray:
    """Rows in the open set of ``dim`` coordinates, as images of a shrunken polydisc.

    ``dim = 1`` returns points of the disc of the given radius.
    """
    if dim == 1:
        return random_polydisc(rng, 1, count, radius)
    return symmetrize_rows(random_polydisc(rng, dim, count, radius))


def normal_fundamental_data(rng: np.random.Generator, n: int, d: int, radius: float = 0.9, unitary: bool = True) -> list:
    """Commuting normal ``(F_1, ..., F_{n-1})`` with joint spectrum in the open set."""
    pts = interior_points(rng, n - 1, d, radius)
    q = random_unitary(rng, d) if unitary else np.eye(d)
    return [q @ np.diag(pts[:, j]) @ adj(q) for j in range(n - 1)]


def normal_pure_tuple(rng: np.random.Generator, n: int, d: int, radius: float = 0.9, p_floor: float = 0.0) -> GammaTuple:
    """Diagonal tuple from polydisc points, conjugated by a random unitary.

    With ``p_floor > 0`` each coordinate has modulus at least ``p_floor``,
    which makes ``P`` invertible.
    """
    r = p_floor + (radius - p_floor) * np.sqrt(rng.random((d, n)))
    z = r * np.exp(2j * np.pi * rng.random((d, n)))
    t = diagonal_tuple(symmetrize_rows(z))
    return t.conjugate(random_unitary(rng, d))


def direct_sum(t1: GammaTuple, t2: GammaTuple) -> GammaTuple:
    def blk(a, b):
        out = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=complex)
        out[: a.shape[0], : a.shape[0]] = a
        out[a.shape[0] :, a.shape[0] :] = b
        return out

    return gamma_tuple([blk(a, b) for a, b in zip(t1.s_ops, t2.s_ops)], blk(t1.p_op, t2.p_op), t1.tol, t1.rank_tol)


def kernel_model_tuple(f, nodes) -> GammaTuple:
    """Compression of the Toeplitz model to the span of ``k_lambda (x) C^d``.

    ``k_lambda`` is the reproducing kernel of the disc at each node.  That
    span is invariant under the adjoint model tuple, so the compression is
    a pure tuple whose ``P`` has the nodes as eigenvalues.  It is usually
    not normal.
    """
    mats = [np.asarray(m, dtype=complex) for m in f]
    n = len(mats) + 1
    d = mats[0].shape[0]
    nodes = np.asarray(nodes, dtype=complex)
    kern = 1.0 / (1.0 - nodes[:, None] * np.conj(nodes[None, :]))
    gram = np.kron(kern, np.eye(d))
    low = np.linalg.cholesky(gram)
    left, right = adj(low), np.linalg.inv(adj(low))

    def restrict(blocks):
        m = np.zeros_like(gram, dtype=complex)
        for a, b in enumerate(blocks):
            m[a * d : (a + 1) * d, a * d : (a + 1) * d] = b
        return adj(left @ m @ right)

    s_ops = [
        restrict([mats[i - 1] + np.conj(lam) * adj(mats[n - i - 1]) for lam in nodes]) for i in range(1, n)
    ]
    p = restrict([np.conj(lam) * np.eye(d) for lam in nodes])
    return gamma_tuple(s_ops, p)


def generated_tuple(rng: np.random.Generator, n: int, max_order: int = 20, conjugate: bool = False) -> tuple:
    """``generate_pure`` output with random valid data; returns ``(tuple, F)``."""
    d = int(rng.integers(1, 4))
    top = max(1, max_order // d - 1)
    N = int(rng.integers(1, top + 1))
    f = normal_fundamental_data(rng, n, d)
    t = generate_pure(f, N)
    if conjugate:
        t = t.conjugate(random_unitary(rng, t.order))
    return t, f


def mixed_tuple(rng: np.random.Generator, n: int, max_order: int = 20) -> GammaTuple:
    """Generated tuple plus a normal pure summand, scrambled by a unitary."""
    extra = int(rng.integers(1, 4))
    t, _ = generated_tuple(rng, n, max_order - extra)
    s = direct_sum(t, normal_pure_tuple(rng, n, extra, radius=0.8))
    return s.conjugate(random_unitary(rng, s.order))


def kernel_tuple(rng: np.random.Generator, n: int, q: int | None = None, radius: float = 0.6) -> GammaTuple:
    """Kernel-model tuple with ``q`` well separated nonzero nodes."""
    d = int(rng.integers(1, 3))
    q = int(rng.integers(2, 4)) if q is None else q
    f = normal_fundamental_data(rng, n, d, radius=0.8)
    base = np.exp(2j * np.pi * (np.arange(q) / q + rng.random() * 0.1))
    nodes = base * (0.3 + (radius - 0.3) * rng.random(q))
    return kernel_model_tuple(f, nodes)


def invertible_normal_tuple(rng: np.random.Generator, n: int, d: int | None = None) -> GammaTuple:
    d = int(rng.integers(2, 6)) if d is None else d
    return normal_pure_tuple(rng, n, d, radius=0.9, p_floor=0.3)


def small_contraction(rng: np.random.Generator, order: int, norm: float = 0.5) -> np.ndarray:
    x = complex_normal(rng, (order, order))
    return norm * x / norm2(x)


def valid_variety(rng: np.random.Generator, n: int, d: int, kind: str | None = None) -> VarietyRep:
    """Random valid variety datum for ``n`` in {2, 3}.

    ``kind`` is ``"normal"`` (commuting normal with spectrum in the open
    set) or ``"small"`` (non-normal small-norm data: ``||F|| < 1`` for
    ``n = 2``; ``F_2 = u F_1 + c I`` with ``2||F_1|| + |c| < 1`` for ``n = 3``).
    """
    kind = kind or ("normal" if rng.random() < 0.5 else "small")
    if kind == "normal":
        return build_variety(normal_fundamental_data(rng, n, d))
    x = complex_normal(rng, (d, d))
    if n == 2:
        return build_variety([(0.2 + 0.75 * rng.random()) * x / norm2(x)])
    if n != 3:
        raise ValueError("small-norm family is implemented for n = 2 and n = 3")
    c = 0.2 * rng.random() * np.exp(2j * np.pi * rng.random())
    a = (1.0 - abs(c)) / 2.0 * (0.3 + 0.65 * rng.random())
    f1 = a * x / norm2(x)
    u = np.exp(2j * np.pi * rng.random())
    return build_variety([f1, u * f1 + c * np.eye(d)])
