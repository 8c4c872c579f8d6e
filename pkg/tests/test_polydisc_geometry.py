import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import elementary_symmetric, in_closed_set
from symdisc.errors import BoundaryBand, UsageError
from symdisc.polydisc_geometry import (
    Region,
    SymPoint,
    classify,
    gamma2_closed_form,
    gamma2_margins,
    membership,
    pencil_inequality_check,
    pencil_margins,
    phi_scalar,
    polar_grid,
    recover_c,
    symmetrize,
)

seeds = st.integers(0, 2**32 - 1)


def pt(*coords):
    return SymPoint.from_coords(np.array(coords, dtype=complex))


def disc_points(rng, n, radius=1.0):
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


# --- frozen values -------------------------------------------------------


def test_symmetrize_examples():
    assert np.allclose(symmetrize([1, 1, 1]).coords, [3, 3, 1])
    assert np.allclose(symmetrize([0, 0, 0, 0]).coords, 0)
    assert np.allclose(symmetrize([1, 1, 0]).coords, [2, 1, 0])


def test_recover_c_examples():
    assert np.allclose(recover_c(pt(2, 2.5, 0.5)), [1, 2])
    assert np.allclose(recover_c(pt(0, 0, 0)), 0)
    assert np.allclose(recover_c(pt(1, 1, 0.25)), [0.8, 0.8], atol=1e-15)
    with pytest.raises(BoundaryBand):
        recover_c(pt(2, 1))


def test_classify_examples():
    assert classify(pt(2, 2.5, 0.5)) is Region.Outside
    assert classify(pt(3, 3, 1)) is Region.DistinguishedBoundary
    assert classify(pt(2, 1, 0)) is Region.TopologicalBoundary
    assert classify(pt(0, 0, 0)) is Region.OpenInterior


def test_membership_chain():
    m = membership(pt(1, 1, 0.25))
    assert m.region is Region.OpenInterior
    assert np.allclose(m.chain[0], [0.8, 0.8], atol=1e-15)
    assert len(m.chain) == 2


def test_recursion_limit():
    with pytest.raises(UsageError):
        membership(SymPoint(n=14, s=np.zeros(13), p=0))


def test_closed_form_examples():
    assert gamma2_closed_form(0, 0)
    assert gamma2_closed_form(2, 1)
    assert not gamma2_closed_form(2.5, 0)


def test_phi_examples():
    for n in (2, 3, 4):
        for i in range(1, n):
            assert phi_scalar(SymPoint(n, np.zeros(n - 1), 0), i) == pytest.approx(n * n)
    assert phi_scalar(pt(3, 3, 1), 1) == pytest.approx(0.0, abs=1e-12)
    assert phi_scalar(pt(2, 1), 1) == pytest.approx(0.0, abs=1e-12)


def test_pencil_origin_margin_positive():
    rep = pencil_inequality_check(pt(0, 0, 0), 16, 8)
    assert rep.worst_margin > 0


def test_pencil_boundary_point_vanishes_at_one():
    x = pt(3, 3, 1)
    assert pencil_margins(x, np.array([1.0])).min() == pytest.approx(0.0, abs=1e-12)
    assert abs(pencil_inequality_check(x).worst_margin) <= 1e-12


def test_pencil_filter_does_not_witness_the_exterior_point():
    # the pencil test is only necessary; for this point its margin stays at
    # zero and the recursion is what rejects it
    x = pt(2, 2.5, 0.5)
    assert pencil_inequality_check(x).worst_margin >= -1e-12
    assert classify(x) is Region.Outside


def test_polar_grid_shapes():
    assert polar_grid(1, 1).tolist() == [0j]
    g = polar_grid(4, 8)
    assert g.size == 32 and np.max(np.abs(g)) == pytest.approx(1.0)


# --- properties ----------------------------------------------------------


@given(seeds, st.integers(2, 6))
def test_symmetrize_matches_subset_expansion(seed, n):
    z = disc_points(np.random.default_rng(seed), n, 1.5)
    assert np.allclose(symmetrize(z).coords, elementary_symmetric(z), atol=1e-12)


@given(seeds, st.integers(2, 5))
def test_closed_polydisc_images_are_accepted(seed, n):
    z = disc_points(np.random.default_rng(seed), n)
    assert classify(symmetrize(z)) is not Region.Outside


@given(seeds, st.integers(2, 5), st.floats(1.01, 3.0))
def test_exterior_images_are_rejected(seed, n, r):
    rng = np.random.default_rng(seed)
    z = disc_points(rng, n)
    z[rng.integers(n)] = r * np.exp(2j * np.pi * rng.random())
    assert classify(symmetrize(z)) is Region.Outside


@given(st.tuples(*[st.floats(-3, 3)] * 4))
def test_n2_agrees_with_closed_form(v):
    s, p = complex(v[0], v[1]), complex(v[2], v[3])
    assume(min(abs(m) for m in gamma2_margins(s, p)) > 1e-6)
    assert classify(SymPoint(2, np.array([s]), p)).inside == gamma2_closed_form(s, p)


@given(seeds, st.integers(2, 5))
def test_agrees_with_root_oracle(seed, n):
    rng = np.random.default_rng(seed)
    z = disc_points(rng, n, 1.3)
    x = symmetrize(z)
    assume(abs(np.max(np.abs(z)) - 1.0) > 1e-6)
    assert classify(x).inside == in_closed_set(x.coords)


@given(seeds, st.integers(2, 4))
def test_phi_nonnegative_on_the_set(seed, n):
    rng = np.random.default_rng(seed)
    x = symmetrize(disc_points(rng, n))
    for a in polar_grid(8, 16):
        xa = x.scaled(a)
        for i in range(1, n):
            assert phi_scalar(xa, i) >= -1e-8


@given(seeds, st.integers(2, 5))
def test_torus_images_satisfy_boundary_relation(seed, n):
    rng = np.random.default_rng(seed)
    x = symmetrize(np.exp(2j * np.pi * rng.random(n)))
    assert classify(x) is Region.DistinguishedBoundary
    assert np.max(np.abs(x.s - np.conj(x.s[::-1]) * x.p)) <= 1e-8


@given(seeds, st.integers(2, 4))
def test_unimodular_p_off_torus_image_rejected(seed, n):
    rng = np.random.default_rng(seed)
    x = symmetrize(np.exp(2j * np.pi * rng.random(n)))
    # a real shift breaks s_i = conj(s_{n-i}) p unless p = 1
    assume(abs(1 - x.p) > 1e-2)
    bumped = SymPoint(n, x.s + 0.05, x.p)
    assert classify(bumped) is Region.Outside
