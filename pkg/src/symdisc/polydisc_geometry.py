"""Scalar geometry of the symmetrized polydisc.

Points are written in symmetrized coordinates ``(s_1, ..., s_{n-1}, p)``.
Membership in the closed set is decided by a recursion that lowers ``n``
by one at each step via ``c_i = (s_i - conj(s_{n-i}) p) / (1 - |p|^2)``;
points with ``|p|`` at one are instead tested against the torus image.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryBand, UsageError

DEFAULT_TOL = 1e-8
BOUNDARY_BAND = 1e-8
MAX_RECURSION_N = 13


class Region(enum.Enum):
    OpenInterior = "OpenInterior"
    TopologicalBoundary = "TopologicalBoundary"
    DistinguishedBoundary = "DistinguishedBoundary"
    Outside = "Outside"

    @property
    def inside(self) -> bool:
        """True for every region of the closed set."""
        return self is not Region.Outside


@dataclass(frozen=True)
class SymPoint:
    n: int
    s: np.ndarray
    p: complex

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.s, dtype=complex))
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "p", complex(self.p))
        if self.n < 2 or s.shape != (self.n - 1,):
            raise UsageError(f"SymPoint with n={self.n} needs {self.n - 1} s-coordinates, got {s.shape}")
        if not (np.all(np.isfinite(s)) and np.isfinite(self.p)):
            raise UsageError("SymPoint coordinates must be finite")

    @classmethod
    def from_coords(cls, coords) -> "SymPoint":
        """Build from the flat vector ``(s_1, ..., s_{n-1}, p)``."""
        c = np.atleast_1d(np.asarray(coords, dtype=complex))
        return cls(n=c.size, s=c[:-1], p=c[-1])

    @property
    def coords(self) -> np.ndarray:
        return np.append(self.s, self.p)

    def scaled(self, alpha: complex) -> "SymPoint":
        """The point ``(alpha s_1, alpha^2 s_2, ..., alpha^n p)``."""
        powers = alpha ** np.arange(1, self.n + 1)
        return SymPoint.from_coords(powers * self.coords)


def symmetrize(z) -> SymPoint:
    """Elementary symmetric polynomials of ``z`` as a ``SymPoint``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    n = z.size
    if n < 2:
        raise UsageError("symmetrize needs at least two coordinates")
    e = np.zeros(n + 1, dtype=complex)
    e[0] = 1.0
    for k, zk in enumerate(z):
        e[1 : k + 2] = e[1 : k + 2] + zk * e[0 : k + 1]
    return SymPoint(n=n, s=e[1:n], p=e[n])


def preimage_roots(x: SymPoint) -> np.ndarray:
    """Roots of ``t^n - s_1 t^{n-1} + s_2 t^{n-2} - ... + (-1)^n p``.

    These are the polydisc coordinates that symmetrize to ``x``.
    """
    signs = (-1.0) ** np.arange(1, x.n + 1)
    return np.roots(np.concatenate([[1.0], signs * x.coords]))


def gamma_excess(coords) -> float:
    """How far the point lies outside the closed set: ``max(0, max|root| - 1)``.

    Works for any number of coordinates, the one-coordinate case being the
    closed unit disc.
    """
    c = np.atleast_1d(np.asarray(coords, dtype=complex))
    if c.size == 1:
        return max(0.0, abs(c[0]) - 1.0)
    roots = preimage_roots(SymPoint.from_coords(c))
    return max(0.0, float(np.max(np.abs(roots))) - 1.0)


def recover_c(x: SymPoint, boundary_band: float = BOUNDARY_BAND) -> np.ndarray:
    """Unique ``c`` with ``s_i = c_i + conj(c_{n-i}) p``."""
    if abs(x.p) >= 1.0 - boundary_band:
        raise BoundaryBand(f"|p| = {abs(x.p):.17g} lies within {boundary_band:g} of the unit circle")
    s = x.s
    return (s - np.conj(s[::-1]) * x.p) / (1.0 - abs(x.p) ** 2)


@dataclass(frozen=True)
class Membership:
    region: Region
    chain: list = field(default_factory=list)
    reason: str = ""


def boundary_relation_defect(x: SymPoint) -> float:
    """``max_i |s_i - conj(s_{n-i}) p|`` relative to ``max(1, |s_i|)``."""
    s = x.s
    gap = np.abs(s - np.conj(s[::-1]) * x.p)
    return float(np.max(gap / np.maximum(1.0, np.abs(s))))


def distinguished_scaled(x: SymPoint) -> np.ndarray:
    """The tuple ``((n-1)/n s_1, ..., 1/n s_{n-1})``."""
    n = x.n
    return x.s * (n - np.arange(1, n)) / n


def _classify_disc(c: complex, tol: float) -> Region:
    r = abs(c)
    if r < 1.0 - tol:
        return Region.OpenInterior
    if r <= 1.0 + tol:
        return Region.DistinguishedBoundary
    return Region.Outside


def _classify_coords(coords: np.ndarray, tol: float, band: float, chain: list) -> Membership:
    if coords.size == 1:
        return Membership(_classify_disc(coords[0], tol), chain)
    x = SymPoint.from_coords(coords)
    ap = abs(x.p)
    if ap > 1.0 + tol:
        return Membership(Region.Outside, chain, f"|p| = {ap:.6g} > 1")
    if ap >= 1.0 - band:
        if boundary_relation_defect(x) > tol:
            return Membership(Region.Outside, chain, "|p| = 1 but s_i != conj(s_{n-i}) p")
        sub = _classify_coords(distinguished_scaled(x), tol, band, [])
        if sub.region is Region.Outside:
            return Membership(Region.Outside, chain, "scaled tuple lies outside")
        return Membership(Region.DistinguishedBoundary, chain)
    c = recover_c(x, band)
    chain = chain + [c]
    sub = _classify_coords(c, tol, band, chain)
    if sub.region is Region.OpenInterior:
        return sub
    if sub.region is Region.Outside:
        return Membership(Region.Outside, sub.chain, sub.reason)
    return Membership(Region.TopologicalBoundary, sub.chain)


def membership(x: SymPoint, tol: float = DEFAULT_TOL, boundary_band: float = BOUNDARY_BAND) -> Membership:
    """Region of ``x`` together with the chain of recovered ``c`` vectors."""
    if x.n > MAX_RECURSION_N:
        raise UsageError(f"membership is limited to n <= {MAX_RECURSION_N}")
    return _classify_coords(x.coords, tol, boundary_band, [])


def classify(x: SymPoint, tol: float = DEFAULT_TOL, boundary_band: float = BOUNDARY_BAND) -> Region:
    """Region of ``x`` in the closed symmetrized polydisc."""
    return membership(x, tol, boundary_band).region


def classify_coords(coords, tol: float = DEFAULT_TOL) -> Region:
    """``classify`` for a flat coordinate vector; length one means the disc."""
    c = np.atleast_1d(np.asarray(coords, dtype=complex))
    return _classify_coords(c, tol, BOUNDARY_BAND, []).region


def gamma2_closed_form(s: complex, p: complex, tol: float = 0.0) -> bool:
    """``|s| <= 2`` and ``|s - conj(s) p| <= 1 - |p|^2``."""
    return bool(abs(s) <= 2.0 + tol and abs(s - np.conj(s) * p) <= 1.0 - abs(p) ** 2 + tol)


def gamma2_margins(s: complex, p: complex):
    """Signed slack of the two inequalities in ``gamma2_closed_form``."""
    return 2.0 - abs(s), 1.0 - abs(p) ** 2 - abs(s - np.conj(s) * p)


def phi_scalar(x: SymPoint, i: int) -> float:
    """Scalar pencil function, real by construction."""
    n = x.n
    if not 1 <= i <= n - 1:
        raise UsageError(f"index i must lie in 1..{n - 1}")
    si, sni, p = x.s[i - 1], x.s[n - i - 1], x.p
    val = (
        n * n * (1.0 - abs(p) ** 2)
        + (abs(si) ** 2 - abs(sni) ** 2)
        - n * (si - np.conj(sni) * p)
        - n * (np.conj(si) - np.conj(p) * sni)
    )
    scale = max(1.0, n * n, abs(si) ** 2, abs(sni) ** 2, n * abs(si), n * abs(sni))
    assert abs(val.imag) <= 1e-12 * scale, "pencil value has an imaginary residue"
    return float(val.real)


def polar_grid(radial: int, angular: int) -> np.ndarray:
    """Points ``r e^{i theta}`` with radii ``j/(radial-1)`` (or 0) and uniform angles."""
    if radial < 1 or angular < 1:
        raise UsageError("grid sizes must be positive")
    radii = np.array([0.0]) if radial == 1 else np.arange(radial) / (radial - 1)
    thetas = 2.0 * np.pi * np.arange(angular) / angular
    # adding 0 turns the signed zeros of the r = 0 ring into +0
    return (radii[:, None] * np.exp(1j * thetas)[None, :]).ravel() + 0.0


@dataclass(frozen=True)
class PencilReport:
    worst_margin: float
    worst_alpha: complex
    worst_index: int


def pencil_margins(x: SymPoint, alphas: np.ndarray) -> np.ndarray:
    """``|n - a^i s_i| - |n a^n p - a^{n-i} s_{n-i}|`` for each ``i`` (rows) and ``a``."""
    n = x.n
    out = np.empty((n - 1, alphas.size))
    for i in range(1, n):
        lhs = np.abs(n - alphas**i * x.s[i - 1])
        rhs = np.abs(n * alphas**n * x.p - alphas ** (n - i) * x.s[n - i - 1])
        out[i - 1] = lhs - rhs
    return out


def pencil_inequality_check(x: SymPoint, alpha_samples: int = 128, radial_samples: int = 64) -> PencilReport:
    """Worst margin of the pencil inequality over a polar grid of the closed disc.

    A negative margin proves ``x`` lies outside; a nonnegative one is only
    a necessary condition for membership.
    """
    if alpha_samples < 16:
        raise UsageError("alpha_samples must be at least 16")
    alphas = polar_grid(radial_samples, alpha_samples)
    m = pencil_margins(x, alphas)
    i, k = np.unravel_index(int(np.argmin(m)), m.shape)
    return PencilReport(worst_margin=float(m[i, k]), worst_alpha=complex(alphas[k]), worst_index=int(i) + 1)


def random_polydisc(rng: np.random.Generator, n: int, size: int, radius: float = 1.0) -> np.ndarray:
    """``size x n`` array uniform on the closed polydisc of the given radius."""
    r = radius * np.sqrt(rng.random((size, n)))
    return r * np.exp(2j * np.pi * rng.random((size, n)))


def symmetrize_rows(z: np.ndarray) -> np.ndarray:
    """Vectorised ``symmetrize`` on the rows of ``z``; returns ``(s_1..s_{n-1}, p)`` rows."""
    z = np.asarray(z, dtype=complex)
    rows, n = z.shape
    e = np.zeros((rows, n + 1), dtype=complex)
    e[:, 0] = 1.0
    for k in range(n):
        e[:, 1 : k + 2] = e[:, 1 : k + 2] + z[:, k : k + 1] * e[:, 0 : k + 1]
    return e[:, 1:]
