import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import radius_sweep
from symdisc.errors import NotAContraction, UsageError
from symdisc.matrix_core import (
    adj,
    as_cmatrix,
    asymmetry_defect,
    defect,
    golden_max,
    hermitian_min_eig,
    numerical_radius,
    op_norm,
    random_unitary,
    spectral_radius,
)

seeds = st.integers(0, 2**32 - 1)
orders = st.integers(1, 6)


def cplx(rng, m, k=None):
    k = m if k is None else k
    return rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))


# --- frozen values -------------------------------------------------------


def test_op_norm_examples():
    assert op_norm(np.eye(3)) == pytest.approx(1.0, abs=1e-15)
    assert op_norm(np.zeros((2, 2))) == 0.0
    assert op_norm([[0, 2], [0, 0]]) == pytest.approx(2.0, abs=1e-14)


def test_op_norm_empty_is_an_error():
    with pytest.raises(UsageError):
        op_norm(np.zeros((0, 0)))


def test_numerical_radius_examples():
    assert numerical_radius(np.diag([1.0, -2.0])) == pytest.approx(2.0, abs=1e-12)
    assert numerical_radius(np.zeros((3, 3))) == 0.0
    # frozen from the dense sweep oracle
    assert radius_sweep([[0, 2], [0, 0]]) == pytest.approx(1.0, abs=1e-12)
    assert numerical_radius([[0, 2], [0, 0]]) == pytest.approx(1.0, abs=1e-10)


def test_defect_examples():
    d = defect(np.zeros((2, 2)))
    assert d.rank == 2 and np.allclose(d.d_matrix, np.eye(2))
    d = defect(np.diag([1.0, -1.0]))
    assert d.rank == 0 and np.allclose(d.d_matrix, 0)
    d = defect(np.diag([0.6, 1.0]))
    assert d.rank == 1
    assert np.allclose(d.d_matrix, np.diag([0.8, 0.0]), atol=1e-15)
    assert np.allclose(d.basis, [[1.0], [0.0]], atol=1e-15)


def test_defect_rejects_expansion():
    with pytest.raises(NotAContraction):
        defect(np.diag([1.0 + 1e-6, 0.0]))


def test_defect_tolerates_roundoff_above_one():
    d = defect(np.diag([1.0 + 1e-12, 0.0]))
    assert d.rank == 1


def test_hermitian_min_eig_examples():
    assert hermitian_min_eig(np.eye(2)) == pytest.approx(1.0)
    assert hermitian_min_eig(np.diag([3.0, -0.5])) == pytest.approx(-0.5)
    p = np.diag([0.6, 1.0])
    assert hermitian_min_eig(np.eye(2) - adj(p) @ p) == pytest.approx(0.0, abs=1e-15)


def test_asymmetry_defect_reports_skew_part():
    assert asymmetry_defect([[0, 1], [-1, 0]]) == pytest.approx(1.0)
    assert asymmetry_defect(np.eye(2)) == 0.0


def test_as_cmatrix_rejects_bad_input():
    with pytest.raises(UsageError):
        as_cmatrix(np.zeros((2, 2, 2)))
    with pytest.raises(UsageError):
        as_cmatrix([[np.nan]])
    assert as_cmatrix(2.0).shape == (1, 1)


def test_golden_max_finds_parabola_top():
    x, f = golden_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-8) and f == pytest.approx(0.0, abs=1e-15)


# --- properties ----------------------------------------------------------


@given(seeds, orders)
def test_norm_submultiplicative(seed, m):
    rng = np.random.default_rng(seed)
    a, b = cplx(rng, m), cplx(rng, m)
    assert op_norm(a @ b) <= op_norm(a) * op_norm(b) + 1e-10


@given(seeds, orders)
def test_radius_unitary_invariant(seed, m):
    rng = np.random.default_rng(seed)
    a, u = cplx(rng, m), random_unitary(rng, m)
    assert numerical_radius(adj(u) @ a @ u) == pytest.approx(numerical_radius(a), abs=1e-8)


@given(seeds, orders)
def test_radius_between_half_norm_and_norm(seed, m):
    rng = np.random.default_rng(seed)
    a = cplx(rng, m)
    w = numerical_radius(a)
    assert 0.5 * op_norm(a) - 1e-10 <= w <= op_norm(a) + 1e-8
    assert w >= spectral_radius(a) - 1e-8


@given(seeds, st.integers(1, 4))
def test_radius_matches_sweep_oracle(seed, m):
    rng = np.random.default_rng(seed)
    a = cplx(rng, m)
    assert numerical_radius(a) == pytest.approx(radius_sweep(a, 4000), abs=1e-6)


@given(seeds, orders, st.floats(0.0, 1.0))
def test_defect_squares_to_identity_minus_pstar_p(seed, m, scale):
    rng = np.random.default_rng(seed)
    a = cplx(rng, m)
    p = scale * a / op_norm(a)
    d = defect(p)
    assert op_norm(d.d_matrix @ d.d_matrix - (np.eye(m) - adj(p) @ p)) <= 1e-10
    assert op_norm(adj(d.basis) @ d.basis - np.eye(d.rank)) <= 1e-12 if d.rank else True
    # D vanishes off the range basis
    proj = d.basis @ adj(d.basis)
    assert op_norm(d.d_matrix - proj @ d.d_matrix @ proj) <= 1e-12


@given(seeds, orders)
def test_random_unitary_is_unitary(seed, m):
    u = random_unitary(np.random.default_rng(seed), m)
    assert op_norm(adj(u) @ u - np.eye(m)) <= 1e-12
