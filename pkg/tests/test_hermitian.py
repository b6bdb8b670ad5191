import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chernricci.almost_abelian import AlmostAbelianSpec, assemble, normal_form_J, realify
from chernricci.errors import InvariantViolation
from chernricci.hermitian import (
    ComplexStructure,
    HermitianStructure,
    check_integrability,
    compatible_metric,
    d_omega,
    d_one_form,
    d_two_form,
    is_kahler,
    omega,
    random_compatible_metric,
)
from chernricci.lie import LieBracket, act_gl

from conftest import catalog_instances, structure

J_STD = ComplexStructure.from_images(4, {1: {2: 1.0}, 3: {4: 1.0}})


def test_from_images():
    J = J_STD.J
    assert np.allclose(J @ np.eye(4)[:, 0], np.eye(4)[:, 1])
    assert np.allclose(J @ J, -np.eye(4))
    with pytest.raises(InvariantViolation):
        ComplexStructure.from_images(4, {1: {2: 1.0}})
    with pytest.raises(InvariantViolation):
        ComplexStructure(np.eye(4))


def test_omega_rr30():
    w = omega(structure("rr_3,0"))
    assert w[0, 1] == pytest.approx(1.0) and w[2, 3] == pytest.approx(1.0)
    assert np.allclose(w, -w.T)
    assert np.count_nonzero(np.round(w, 12)) == 4


def test_omega_normal_form():
    n = 3
    spec = AlmostAbelianSpec(n, np.zeros((4, 4)), 0.0, np.zeros(4))
    w = omega(assemble(spec))
    expected = np.zeros((6, 6))
    for i in range(n):
        expected[i, 5 - i] = 1.0
        expected[5 - i, i] = -1.0
    assert np.allclose(w, expected)


def test_omega_flips_with_J():
    h = structure("rr_3,0")
    h2 = HermitianStructure(h.bracket, -h.J, h.g)
    assert np.allclose(omega(h2), -omega(h))


def test_integrability():
    for entry, params, inst in catalog_instances(samples=3):
        h = inst.structure
        assert check_integrability(h.bracket, h.J), entry.label
    assert check_integrability(LieBracket.abelian(4), J_STD)
    rh3 = structure("rh_3").bracket
    swapped = ComplexStructure.from_images(4, {1: {3: 1.0}, 2: {4: 1.0}})
    chk = check_integrability(rh3, swapped)
    assert not chk and chk.residual > 0.5


def test_construction_rejects_bad_input():
    b = LieBracket.abelian(4)
    with pytest.raises(InvariantViolation, match="positive-definite"):
        HermitianStructure(b, J_STD, -np.eye(4))
    with pytest.raises(InvariantViolation, match="compatibility"):
        HermitianStructure(b, J_STD, np.diag([1.0, 2.0, 1.0, 1.0]))
    rh3 = structure("rh_3").bracket
    with pytest.raises(InvariantViolation, match="integrability"):
        HermitianStructure(rh3, ComplexStructure.from_images(4, {1: {3: 1.0}, 2: {4: 1.0}}), np.eye(4))


def test_kahler_examples():
    assert is_kahler(structure("r_2r_2"))
    assert is_kahler(HermitianStructure(LieBracket.abelian(4), J_STD, np.eye(4)))
    h = structure("rr_3,1")
    chk = is_kahler(h)
    assert not chk and np.abs(d_omega(h)).max() > 0.5


def test_d_omega_is_alternating():
    dw = d_omega(structure("h_4"))
    assert np.allclose(dw, -dw.transpose(1, 0, 2))
    assert np.allclose(dw, -dw.transpose(0, 2, 1))


def test_compatible_metric():
    rng = np.random.default_rng(1)
    for _ in range(10):
        g = random_compatible_metric(J_STD, rng)
        assert np.allclose(J_STD.J.T @ g @ J_STD.J, g)
        np.linalg.cholesky(g)
    assert np.allclose(compatible_metric(J_STD), np.eye(4))


_coef = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(_coef, min_size=16, max_size=16), st.lists(_coef, min_size=4, max_size=4),
       st.sampled_from(["rr_3,0", "d_4,1", "h_4", "r_4,1", "r_2r_2"]))
def test_d_squared_vanishes(m, alpha, name):
    h = 2.0 * np.eye(4) + 0.3 * np.array(m).reshape(4, 4)
    b = act_gl(structure(name).bracket, h)
    dd = d_two_form(b, d_one_form(b, alpha))
    assert np.abs(dd).max() <= 1e-9 * max(1.0, b.scale()) ** 2 * max(1.0, np.abs(alpha).max())


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**32 - 1), st.booleans(), st.booleans())
def test_almost_abelian_kahler_criterion(n, seed, skew, with_d):
    rng = np.random.default_rng(seed)
    k = n - 1
    Z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    if skew:
        Z = 0.5 * (Z - Z.conj().T)
    A = realify(Z)
    d = rng.normal(size=2 * k) if with_d else np.zeros(2 * k)
    h = assemble(AlmostAbelianSpec(n, A, float(rng.uniform(0, 2)), d))
    expected = (not with_d) and np.abs(A + A.T).max() <= 1e-12
    assert bool(is_kahler(h)) == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_omega_nondegenerate(seed):
    rng = np.random.default_rng(seed)
    J = normal_form_J(2)
    g = random_compatible_metric(J, rng)
    h = HermitianStructure(LieBracket.abelian(4), J, g)
    w = omega(h)
    assert np.allclose(w, -w.T)
    assert abs(np.linalg.det(w)) > 1e-8
