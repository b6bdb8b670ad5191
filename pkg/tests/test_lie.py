import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chernricci.errors import InvariantViolation, NonInvertibleError
from chernricci.lie import (
    LieBracket,
    Subspace,
    act_gl,
    ad,
    center,
    derivation_space,
    is_abelian_ideal,
    is_derivation,
    is_ideal,
    is_nilpotent,
    is_subalgebra,
    is_two_step_nilpotent,
    nilpotency_step,
    validate_bracket,
)

from conftest import catalog_instances, structure

RH3 = LieBracket.from_relations(4, [(1, 2, 3, 1.0)])
RR30 = LieBracket.from_relations(4, [(1, 2, 2, 1.0)])
H3 = LieBracket.from_relations(3, [(1, 2, 3, 1.0)])


def _names(report):
    return {v.name for v in report}


def test_validate_heisenberg():
    assert validate_bracket(RH3) == []


def test_validate_flags_broken_antisymmetry():
    c = np.zeros((4, 4, 4))
    c[0, 1, 2] = 1.0
    c[1, 0, 2] = 1.0
    assert "antisymmetry" in _names(validate_bracket(LieBracket(c)))


def test_validate_flags_jacobi():
    b = LieBracket.from_relations(3, [(1, 2, 2, 1.0), (1, 3, 3, 1.0), (2, 3, 1, 1.0)])
    report = validate_bracket(b)
    assert _names(report) == {"jacobi"}
    assert report[0].magnitude > 0.5


def test_from_relations_fills_antisymmetric_part():
    assert RR30.c[0, 1, 1] == 1.0 and RR30.c[1, 0, 1] == -1.0
    with pytest.raises(InvariantViolation):
        LieBracket.from_relations(4, [(1, 5, 1, 1.0)])
    assert RR30.relations() == [(1, 2, 2, 1.0)]


def test_ad():
    M = ad(RR30, [1, 0, 0, 0])
    expected = np.zeros((4, 4))
    expected[1, 1] = 1.0
    assert np.array_equal(M, expected)
    assert not ad(RR30, np.zeros(4)).any()
    M = ad(RH3, [1, 0, 0, 0])
    expected = np.zeros((4, 4))
    expected[2, 1] = 1.0
    assert np.array_equal(M, expected)


def test_ideals_and_subalgebras():
    assert is_abelian_ideal(RR30, Subspace.coordinate(4, [2, 3, 4]))
    assert is_abelian_ideal(RH3, Subspace.zero(4))
    assert not is_abelian_ideal(RH3, Subspace.coordinate(4, [1, 2]))
    assert is_subalgebra(RH3, Subspace.coordinate(4, [1, 2, 3]))
    assert is_subalgebra(RH3, Subspace.full(4))
    assert not is_subalgebra(RH3, Subspace.coordinate(4, [1, 2]))
    assert is_ideal(RH3, Subspace.coordinate(4, [3]))


def test_nilpotency():
    assert is_nilpotent(RH3)
    assert is_nilpotent(LieBracket.abelian(4))
    assert not is_nilpotent(RR30)
    assert nilpotency_step(RH3) == 2
    assert nilpotency_step(RR30) is None
    assert is_two_step_nilpotent(RH3)
    assert not is_two_step_nilpotent(LieBracket.abelian(4))


def test_center():
    assert center(RH3).same_as(Subspace.coordinate(4, [3, 4]))
    assert center(LieBracket.abelian(4)).same_as(Subspace.full(4))
    assert center(RR30).same_as(Subspace.coordinate(4, [3, 4]))


def test_derivation_space_dimensions():
    assert len(derivation_space(LieBracket.abelian(2))) == 4
    assert len(derivation_space(H3)) == 6


def test_derivation_space_brute_force_h3():
    # linear system D[x,y] = [Dx,y] + [x,Dy] in the 9 entries of D, assembled directly
    rows = []
    for i in range(3):
        for j in range(i + 1, 3):
            for k in range(3):
                row = np.zeros(9)
                for a in range(3):
                    for b in range(3):
                        E = np.zeros((3, 3))
                        E[a, b] = 1.0
                        lhs = E @ H3.c[i, j]
                        rhs = H3(E[:, i], np.eye(3)[j]) + H3(np.eye(3)[i], E[:, j])
                        row[3 * a + b] = (lhs - rhs)[k]
                rows.append(row)
    assert 9 - np.linalg.matrix_rank(np.array(rows)) == 6


def test_derivations_of_rr30():
    basis = derivation_space(RR30)
    M = np.array([D.ravel() for D in basis])
    for target in (np.diag([0, 0, 1, 1.0]), np.diag([0, 1, 0, 0.0])):
        coeffs, *_ = np.linalg.lstsq(M.T, target.ravel(), rcond=None)
        assert np.allclose(M.T @ coeffs, target.ravel())
    for D in basis:
        assert is_derivation(RR30, D)


def test_is_derivation():
    assert is_derivation(LieBracket.abelian(4), np.eye(4))
    assert is_derivation(RR30, np.diag([0, 0, 1, 1.0]))
    chk = is_derivation(RH3, np.eye(4))
    assert not chk and chk.residual == pytest.approx(1.0)


def test_act_gl():
    assert act_gl(H3, np.eye(3)).allclose(H3)
    assert np.isclose(act_gl(H3, 2 * np.eye(3)).c[0, 1, 2], 0.5)
    with pytest.raises(NonInvertibleError, match="non-invertible"):
        act_gl(H3, np.zeros((3, 3)))


_mat = arrays(np.float64, (4, 4), elements=st.floats(-2, 2))


def _invertible(M):
    return np.eye(4) * 3.0 + M


@settings(max_examples=40, deadline=None)
@given(_mat, _mat, st.sampled_from(["rh_3", "rr_3,0", "r_2r_2", "d_4,1", "h_4", "r_4,1"]))
def test_act_gl_composes(m1, m2, name):
    b = structure(name).bracket
    h1, h2 = _invertible(m1), _invertible(m2)
    lhs = act_gl(act_gl(b, h1), h2)
    rhs = act_gl(b, h2 @ h1)
    scale = max(1.0, lhs.scale())
    assert np.abs(lhs.c - rhs.c).max() <= 1e-9 * scale * np.linalg.cond(h1) * np.linalg.cond(h2)


@settings(max_examples=40, deadline=None)
@given(_mat)
def test_act_gl_preserves_jacobi(m):
    b = act_gl(RR30, _invertible(m))
    assert validate_bracket(b, tol=1e-8) == []


def test_catalog_brackets_valid_and_center_is_abelian_ideal():
    for entry, params, inst in catalog_instances(samples=3):
        b = inst.structure.bracket
        assert validate_bracket(b) == [], entry.label
        assert is_abelian_ideal(b, center(b)), entry.label


def test_derivation_space_stable_under_permutation():
    perm = np.eye(4)[[2, 0, 3, 1]]
    for name in ("rr_3,0", "d_4,1", "h_4"):
        b = structure(name).bracket
        basis = derivation_space(b)
        assert len(derivation_space(act_gl(b, perm))) == len(basis)
        for D in basis:
            assert is_derivation(b, D)


def test_subspace_rejects_dependent_basis():
    with pytest.raises(InvariantViolation):
        Subspace(np.array([[1.0, 2.0], [0.0, 0.0]]))
    s = Subspace.span([[1.0, 0, 0], [2.0, 0, 0], [0, 1.0, 0]])
    assert s.rank == 2
