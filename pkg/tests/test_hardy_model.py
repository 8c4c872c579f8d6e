import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import theta_series
from symdisc import corpus
from symdisc.corpus import rng_for
from symdisc.errors import PurityRequired, UsageError
from symdisc.gamma_ops import fundamental_tuple, gamma_tuple, generate_pure, scalar_tuple, verify_fot_identities
from symdisc.hardy_model import (
    TruncatedHardy,
    build_dilation,
    build_w,
    characteristic_function,
    induced_defect_unitaries,
    minimality_rank,
    model_compression,
    theta_coefficients,
    verify_admissibility,
    verify_dilation_moments,
    verify_equivalence_certificate,
    verify_l0,
)
from symdisc.matrix_core import adj, defect, op_norm, random_unitary
from symdisc.polydisc_geometry import SymPoint, symmetrize

seeds = st.integers(0, 2**32 - 1)


def scalar(*coords):
    return scalar_tuple(SymPoint.from_coords(np.array(coords, dtype=complex)))


def generated(seed, n=3, order=12, conjugate=False):
    return corpus.generated_tuple(rng_for(seed, "hm"), n, order, conjugate)[0]


# --- characteristic function ---------------------------------------------


def test_theta_at_zero_is_minus_p():
    p = corpus.small_contraction(np.random.default_rng(0), 3)
    dp, dps = defect(p), defect(adj(p))
    assert np.allclose(characteristic_function(p, 0), -adj(dps.basis) @ p @ dp.basis)


def test_theta_scalar_vanishes_at_p():
    assert characteristic_function(np.array([[0.5]]), 0.5)[0, 0] == pytest.approx(0.0, abs=1e-15)


def test_theta_unitary_is_empty():
    assert characteristic_function(random_unitary(np.random.default_rng(1), 3), 0.3).shape == (0, 0)


@given(seeds, st.integers(1, 4), st.floats(0, 0.9), st.floats(0, 1))
def test_theta_matches_series_oracle(seed, m, r, ang):
    rng = np.random.default_rng(seed)
    p = corpus.small_contraction(rng, m, 0.7)
    z = r * np.exp(2j * np.pi * ang)
    dp, dps = defect(p), defect(adj(p))
    ref = adj(dps.basis) @ theta_series(p, z) @ dp.basis
    assert op_norm(characteristic_function(p, z) - ref) <= 1e-10


def test_theta_coefficients_sum_to_theta():
    p = corpus.small_contraction(np.random.default_rng(2), 3, 0.5)
    coeffs = theta_coefficients(p, 80)
    z = 0.4 - 0.3j
    assert op_norm(sum(z**k * c for k, c in enumerate(coeffs)) - characteristic_function(p, z)) <= 1e-12


# --- the embedding W -----------------------------------------------------


def test_w_for_zero_p_is_degree_zero_embedding():
    t = scalar(0.2, 0.1, 0.0)
    w = build_w(t, 4)
    assert np.allclose(w, np.eye(5)[:, :1])


def test_w_exact_for_nilpotent_shift():
    t = generate_pure([np.diag([0.3, 0.1j])], 4)
    w = build_w(t, 4)
    assert op_norm(adj(w) @ w - np.eye(t.order)) <= 1e-15


def test_w_geometric_tail():
    t = gamma_tuple([np.array([[0.2]])], np.array([[0.5]]))
    w = build_w(t, 60)
    assert abs((adj(w) @ w)[0, 0] - 1.0) <= 1e-15


def test_w_requires_purity():
    with pytest.raises(PurityRequired):
        build_w(scalar(1.0, 1.0, 1.0), 3)


# --- dilation ------------------------------------------------------------


def test_dilation_of_scalar_with_zero_p():
    s1, s2 = 0.3 + 0.1j, -0.2 + 0.05j
    t = scalar(s1, s2, 0.0)
    b = build_dilation(t, 5)
    space = b.space
    t1 = b.t_ops[0]
    assert t1[space.block(0), space.block(0)][0, 0] == pytest.approx(s1)
    assert t1[space.block(1), space.block(0)][0, 0] == pytest.approx(np.conj(s2))
    w = b.w_op
    for i, s in enumerate((s1, s2)):
        assert (adj(w) @ b.t_ops[i] @ w)[0, 0] == pytest.approx(s, abs=1e-15)


def test_dilation_of_generated_tuple_at_same_degree():
    f = corpus.normal_fundamental_data(rng_for(0, "dg"), 3, 2)
    t = generate_pure(f, 5)
    b = build_dilation(t, 5)
    assert max(b.residuals.values()) <= 1e-8
    rep = verify_dilation_moments(b, t, 4)
    assert rep.max_residual <= 1e-8 and rep.max_residual <= 10 * b.tail_bound


def test_isometry_gives_identity_dilation():
    x = symmetrize(np.exp(2j * np.pi * np.array([0.2, 0.5])))
    b = build_dilation(scalar_tuple(x))
    assert b.identity and b.tail_bound == 0.0


def test_moment_degree_zero_is_isometry_defect():
    t = gamma_tuple([np.array([[0.2]])], np.array([[0.5]]))
    b = build_dilation(t, 10)
    rep = verify_dilation_moments(b, t, 2)
    w = b.w_op
    assert rep.residuals[(0, 0)] == pytest.approx(op_norm(adj(w) @ w - np.eye(1)), abs=1e-18)


def test_moments_scalar_example():
    t = scalar(0.3, 0.1j, 0.2)
    b = build_dilation(t)
    assert verify_dilation_moments(b, t, 3).max_residual <= 1e-12


@given(seeds, st.integers(2, 4))
@settings(max_examples=10)
def test_moments_within_tail_budget(seed, n):
    t = generated(seed, n, 12, conjugate=True)
    b = build_dilation(t)
    rep = verify_dilation_moments(b, t, 4)
    assert rep.max_residual <= 10 * b.tail_bound
    assert rep.max_coextension <= 10 * b.tail_bound


def test_tail_bound_shrinks_with_degree():
    t = corpus.normal_pure_tuple(rng_for(0, "tb"), 2, 3, radius=0.7)
    r = []
    for N in (8, 16):
        b = build_dilation(t, N)
        rep = verify_dilation_moments(b, t, 4)
        assert max(rep.max_residual, rep.max_coextension) <= b.tail_bound
        r.append(b.tail_bound)
    assert r[1] < 0.1 * r[0]


def test_block_shift_identities():
    space = TruncatedHardy(2, 4)
    v = space.shift()
    eye = np.eye(space.total_dim)
    assert np.allclose(adj(v) @ v, eye - space.block_projection(4))
    assert np.allclose(eye - v @ adj(v), space.block_projection(0))


@given(seeds, st.integers(2, 4))
@settings(max_examples=10)
def test_fundamental_tuple_round_trip(seed, n):
    t = generated(seed, n, 12, conjugate=True)
    b = build_dilation(t, 6)
    big = gamma_tuple(b.t_ops, b.v_op)
    back = fundamental_tuple(big.adjoint())
    assert max(op_norm(x - y) for x, y in zip(back.matrices, b.fot_adj.matrices)) <= 1e-8


def test_minimality_rank():
    t = generate_pure([np.array([[0.5]]), np.array([[0.3]])], 3)
    b = build_dilation(t, 3)
    assert minimality_rank(b, t) == b.space.total_dim


# --- L0 identity ---------------------------------------------------------


def test_l0_zero_p():
    rep = verify_l0(np.zeros((2, 2)), 5)
    assert rep.residual <= 1e-15 and rep.band == 0


def test_l0_scalar():
    rep = verify_l0(np.array([[0.5]]), 40)
    assert rep.residual <= 1e-8 and rep.kernel_residual <= 1e-8


def test_l0_nilpotent_index_two():
    rep = verify_l0(np.array([[0, 0.7], [0, 0]]), 10)
    assert rep.residual <= 1e-10 and rep.kernel_residual <= 1e-10


@given(seeds, st.integers(1, 5), st.floats(0.05, 0.5))
@settings(max_examples=15)
def test_l0_small_norm(seed, m, norm):
    p = corpus.small_contraction(np.random.default_rng(seed), m, norm)
    rep = verify_l0(p, 40)
    assert max(rep.residual, rep.kernel_residual) <= 1e-8


# --- model ---------------------------------------------------------------


def test_model_zero_p():
    c = [0.3, -0.1j]
    t = gamma_tuple([c[0] * np.eye(2), c[1] * np.eye(2)], np.zeros((2, 2)))
    m = model_compression(t, 4)
    assert m.projection_rank == 2
    for r, ci in zip(m.r_ops, c):
        assert np.allclose(r, ci * np.eye(2), atol=1e-14)
    assert np.allclose(m.r_p, 0, atol=1e-14)


def test_model_scalar_with_nonzero_p():
    t = scalar(0.3, 0.2j, 0.5)
    assert model_compression(t, 60).residual <= 1e-8


@given(seeds, st.integers(2, 4))
@settings(max_examples=10)
def test_model_round_trip_and_duality(seed, n):
    t = generated(seed, n, 12, conjugate=True)
    m = model_compression(t)
    b = build_dilation(t)
    assert m.residual <= 1e-8
    assert abs(m.residual - max(b.residuals.values())) <= 1e-8


def test_model_on_kernel_tuple():
    t = corpus.kernel_tuple(rng_for(0, "km"), 3, q=3, radius=0.5)
    assert model_compression(t).residual <= 1e-8


# --- admissibility and certificates ----------------------------------------


def test_admissibility_scalar():
    t = scalar(0.3, 0.1 - 0.2j, 0.4)
    a, b = fundamental_tuple(t), fundamental_tuple(t.adjoint())
    assert verify_admissibility(a, b, t.p_op).worst <= 1e-12


def test_admissibility_constant_term_matches_identity_suite():
    t = generated(3, 3, 12)
    a, b = fundamental_tuple(t), fundamental_tuple(t.adjoint())
    z0 = verify_admissibility(a, b, t.p_op, z_samples=1)
    rep = verify_fot_identities(t, a, b)
    assert z0.worst <= 1e-12 and rep.worst("shift_intertwine") <= 1e-12


@given(seeds)
@settings(max_examples=10)
def test_admissibility_generated(seed):
    t = generated(seed, 3, 16, conjugate=True)
    a, b = fundamental_tuple(t), fundamental_tuple(t.adjoint())
    assert verify_admissibility(a, b, t.p_op, 32).worst <= 1e-8


def test_admissibility_detects_swapped_indices():
    t = generate_pure([np.diag([0.6, -0.5j]), np.diag([0.1, 0.2])], 4)
    a, b = fundamental_tuple(t), fundamental_tuple(t.adjoint())
    from symdisc.gamma_ops import FundamentalTuple

    swapped = FundamentalTuple(b.matrices[::-1], b.residuals, b.basis)
    assert verify_admissibility(a, swapped, t.p_op).worst > 0.1


def test_equivalence_identity_certificate():
    t = generated(4, 3, 12)
    b = fundamental_tuple(t.adjoint())
    r, rs = t.defect.rank, t.defect_adj.rank
    assert verify_equivalence_certificate(np.eye(r), np.eye(rs), t.p_op, t.p_op, b, b).ok


def test_equivalence_under_conjugation():
    rng = rng_for(5, "eq")
    t = generated(5, 3, 12)
    v = random_unitary(rng, t.order)
    t2 = t.conjugate(v)
    # conjugate(v) is v* t v, so the carrying unitary is v*
    u, us = induced_defect_unitaries(adj(v), t, t2)
    b, b2 = fundamental_tuple(t.adjoint()), fundamental_tuple(t2.adjoint())
    assert verify_equivalence_certificate(u, us, t.p_op, t2.p_op, b, b2).ok


def test_equivalence_mismatch_rejected():
    t = generated(6, 3, 12)
    b = fundamental_tuple(t.adjoint())
    r, rs = t.defect.rank, t.defect_adj.rank
    t2 = t.conjugate(random_unitary(np.random.default_rng(0), t.order))
    b2 = fundamental_tuple(t2.adjoint())
    rep = verify_equivalence_certificate(np.eye(r), np.eye(rs), t.p_op, 0.5 * t2.p_op, b, b2)
    assert not rep.ok


def test_equivalence_rejects_nonunitary():
    t = generated(6, 3, 12)
    b = fundamental_tuple(t.adjoint())
    r, rs = t.defect.rank, t.defect_adj.rank
    with pytest.raises(UsageError):
        verify_equivalence_certificate(2 * np.eye(r), np.eye(rs), t.p_op, t.p_op, b, b)
