"""Random polynomials in several commuting variables.

A polynomial is stored as a list of exponent tuples with one coefficient
per monomial; coefficients are scalars or ``q x q`` matrices.  Evaluation
works on point clouds and on commuting matrix tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


def monomials(nvars: int, degree: int):
    """Exponent tuples of total degree ``<= degree`` in graded order."""
    out = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for j in combo:
                e[j] += 1
            out.append(tuple(e))
    return out


@dataclass(frozen=True)
class Polynomial:
    exponents: tuple
    coeffs: np.ndarray  # shape (terms,) or (terms, q, q)

    @property
    def matrix_valued(self) -> bool:
        return self.coeffs.ndim == 3

    @property
    def nvars(self) -> int:
        return len(self.exponents[0])


def random_polynomial(rng: np.random.Generator, nvars: int, max_degree: int = 3, coeff_size: int = 0) -> Polynomial:
    """Polynomial of random degree ``1..max_degree`` with Gaussian coefficients.

    ``coeff_size = 0`` gives scalar coefficients, otherwise ``q x q`` ones.
    """
    degree = int(rng.integers(1, max_degree + 1))
    exps = tuple(monomials(nvars, degree))
    shape = (len(exps),) if coeff_size == 0 else (len(exps), coeff_size, coeff_size)
    coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return Polynomial(exponents=exps, coeffs=coeffs / np.sqrt(2 * len(exps)))


def constant_polynomial(nvars: int, value: complex) -> Polynomial:
    return Polynomial(exponents=((0,) * nvars,), coeffs=np.array([complex(value)]))


def monomial_table(points: np.ndarray, exponents) -> np.ndarray:
    """``points`` (N x k) raised to each exponent: an N x terms array."""
    pts = np.asarray(points, dtype=complex)
    deg = max(sum(e) for e in exponents)
    powers = [pts**j for j in range(deg + 1)]
    cols = []
    for e in exponents:
        col = np.ones(pts.shape[0], dtype=complex)
        for j, a in enumerate(e):
            if a:
                col = col * powers[a][:, j]
        cols.append(col)
    return np.stack(cols, axis=1)


def evaluate_points(f: Polynomial, points: np.ndarray) -> np.ndarray:
    """Values at every row of ``points``: shape (N,) or (N, q, q)."""
    table = monomial_table(points, f.exponents)
    if f.matrix_valued:
        return np.tensordot(table, f.coeffs, axes=(1, 0))
    return table @ f.coeffs


def value_norms(f: Polynomial, points: np.ndarray) -> np.ndarray:
    """``|f|`` (or the spectral norm of a matrix value) at each row of ``points``."""
    vals = evaluate_points(f, points)
    if f.matrix_valued:
        return np.linalg.norm(vals, ord=2, axis=(1, 2))
    return np.abs(vals)


def operator_monomials(mats, exponents) -> dict:
    """Matrices ``T^e`` for each exponent, built by reusing lower-degree products."""
    size = mats[0].shape[0]
    table = {(0,) * len(mats): np.eye(size, dtype=complex)}
    for e in sorted(set(exponents), key=sum):
        if e in table:
            continue
        stack = [e]
        while stack:
            cur = stack[-1]
            j = next(k for k, a in enumerate(cur) if a)
            prev = cur[:j] + (cur[j] - 1,) + cur[j + 1 :]
            if prev in table:
                table[cur] = mats[j] @ table[prev]
                stack.pop()
            else:
                stack.append(prev)
    return table


def evaluate_operator(f: Polynomial, mats) -> np.ndarray:
    """``f(T_1, ..., T_k)``; matrix coefficients enter as ``C kron T^e``."""
    table = operator_monomials(mats, f.exponents)
    size = mats[0].shape[0]
    if f.matrix_valued:
        q = f.coeffs.shape[1]
        out = np.zeros((q * size, q * size), dtype=complex)
        for c, e in zip(f.coeffs, f.exponents):
            out += np.kron(c, table[e])
        return out
    out = np.zeros((size, size), dtype=complex)
    for c, e in zip(f.coeffs, f.exponents):
        out += c * table[e]
    return out
