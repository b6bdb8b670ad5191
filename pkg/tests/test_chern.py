import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chernricci.almost_abelian import assemble, mu_abcde, random_spec
from chernricci.chern import (
    chern_ricci_form,
    chern_ricci_operator,
    cluster_values,
    eigenspace,
    kernel_of,
    singular_times,
    symmetric_eigen,
)
from chernricci.errors import InvariantViolation
from chernricci.hermitian import (
    ComplexStructure,
    HermitianStructure,
    abelian_residual,
    bi_invariance_residual,
    d_two_form,
    random_compatible_metric,
)
from chernricci.lie import LieBracket, Subspace, center

from conftest import catalog_instances, structure


def _diag(d, values):
    return np.allclose(d.P, np.diag(values), atol=1e-10)


def test_rr30():
    h = structure("rr_3,0")
    p = chern_ricci_form(h)
    expected = np.zeros((4, 4))
    expected[0, 1], expected[1, 0] = -1.0, 1.0
    assert np.allclose(p, expected)
    assert _diag(chern_ricci_operator(h), [-1, -1, 0, 0])


def test_table_rows():
    d = chern_ricci_operator(structure("r_2r_2"))
    assert _diag(d, [-1, -1, -1, -1])
    assert np.allclose(d.eigenvalues, -1)
    assert _diag(chern_ricci_operator(structure("r'_2", J="J1")), [-2, 2, -2, 2])
    assert _diag(chern_ricci_operator(structure("h_4")), [0, -3, 0, -3])


def test_shrinking_almost_abelian_form():
    # gamma = -2: p = -(1 + gamma) e^1 ^ e^4 = e^1 ^ e^4
    p = chern_ricci_form(assemble(mu_abcde(-2.0, -1.0, 1.0, 0.0, 0.0)))
    assert p[0, 3] == pytest.approx(1.0)
    assert np.count_nonzero(np.abs(p) > 1e-12) == 2


def test_nilpotent_vanishing_fixed():
    h = structure("rh_3")
    assert np.allclose(chern_ricci_form(h), 0)
    assert chern_ricci_operator(h).is_zero


def test_singular_times():
    assert singular_times(chern_ricci_operator(structure("rr_3,0"))) == pytest.approx((-0.5, np.inf))
    assert singular_times(chern_ricci_operator(structure("rh_3"))) == (-np.inf, np.inf)
    assert singular_times(chern_ricci_operator(structure("r'_2", J="J1"))) == pytest.approx((-0.25, 0.25))


def test_eigenspaces():
    d = chern_ricci_operator(structure("rr_3,0"))
    assert kernel_of(d).same_as(Subspace.coordinate(4, [3, 4]))
    assert eigenspace(d, 0.0).same_as(Subspace.coordinate(4, [3, 4]))
    assert eigenspace(chern_ricci_operator(structure("rh_3")), 0.0).same_as(Subspace.full(4))
    d = chern_ricci_operator(structure("r'_2", J="J1"))
    assert eigenspace(d, 2.0).same_as(Subspace.coordinate(4, [2, 4]))
    with pytest.raises(InvariantViolation):
        eigenspace(d, 1.0)


def test_eigenbasis_is_g_orthonormal():
    rng = np.random.default_rng(3)
    h = structure("d_4,1")
    h = h.with_metric(random_compatible_metric(h.J, rng))
    d = chern_ricci_operator(h)
    E = d.eigenbasis
    assert np.allclose(E.T @ h.g @ E, np.eye(4), atol=1e-10)
    assert np.allclose(d.P @ E, E @ np.diag(d.eigenvalues), atol=1e-9)


def test_cluster_values():
    cl = cluster_values([1.0, 1.0 + 1e-10, -3e-11, 2.0])
    assert [(v, sorted(m)) for v, m in cl] == [(0.0, [2]), (pytest.approx(1.0), [0, 1]), (2.0, [3])]


def test_symmetric_eigen_matches_numpy():
    rng = np.random.default_rng(5)
    for n in (2, 4, 6, 8):
        A = rng.normal(size=(n, n))
        S = A + A.T
        w, V = symmetric_eigen(S)
        assert np.allclose(w, np.linalg.eigvalsh(S), atol=1e-10)
        assert np.allclose(V.T @ V, np.eye(n), atol=1e-10)
        assert np.allclose(S @ V, V * w, atol=1e-9)


def _check_invariants(h):
    d = chern_ricci_operator(h)
    p, P, J, g = d.p, d.P, h.J.J, h.g
    scale = max(1.0, np.abs(p).max(), h.bracket.scale() ** 2) * max(1.0, np.abs(g).max())
    tol = 1e-9 * scale * max(1.0, np.linalg.cond(g))
    assert np.abs(p + p.T).max() <= tol
    assert np.abs(d_two_form(h.bracket, p)).max() <= tol * max(1.0, h.bracket.scale())
    assert np.abs(J.T @ p @ J - p).max() <= tol
    assert np.abs(P @ J - J @ P).max() <= tol
    assert np.abs(g @ P - (g @ P).T).max() <= tol
    # p(X, Y) = omega(PX, Y) = omega(X, PY)
    W = h.omega
    assert np.abs(P.T @ W - p).max() <= tol
    assert np.abs(W @ P - p).max() <= tol
    z = center(h.bracket)
    if z.rank:
        assert np.abs(P @ z.basis).max() <= tol


def test_invariants_on_catalog():
    for entry, params, inst in catalog_instances(samples=3):
        _check_invariants(inst.structure)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_invariants_almost_abelian(seed, n):
    rng = np.random.default_rng(seed)
    h = assemble(random_spec(rng, n))
    _check_invariants(h)
    _check_invariants(h.with_metric(random_compatible_metric(h.J, rng, spread=0.5)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["rr_3,0", "d_4,1", "h_4", "r_4,1", "rr_3,1", "d_4"]))
def test_invariants_random_metrics(seed, name):
    rng = np.random.default_rng(seed)
    h = structure(name, variant=1) if name == "d_4" else structure(name)
    _check_invariants(h.with_metric(random_compatible_metric(h.J, rng)))


def test_p_depends_only_on_J():
    rng = np.random.default_rng(11)
    h = structure("d_4,1/2", variant=1)
    p0 = chern_ricci_form(h)
    for _ in range(5):
        assert np.allclose(chern_ricci_form(h.with_metric(random_compatible_metric(h.J, rng))), p0)


def test_bi_invariant_J_gives_zero():
    # the realification of the complex nonabelian 2-dimensional algebra
    h = structure("r'_2", J="J_s,t", s=0.0, t=1.0)
    assert bi_invariance_residual(h.bracket, h.J) < 1e-12
    rng = np.random.default_rng(2)
    for _ in range(5):
        g = random_compatible_metric(h.J, rng)
        assert np.allclose(chern_ricci_operator(h.with_metric(g)).P, 0, atol=1e-10)


def test_bi_invariant_complex_heisenberg():
    b = LieBracket.from_relations(6, [(1, 3, 5, 1.0), (2, 4, 5, -1.0), (1, 4, 6, 1.0), (2, 3, 6, 1.0)])
    J = ComplexStructure.from_images(6, {1: {2: 1.0}, 3: {4: 1.0}, 5: {6: 1.0}})
    assert bi_invariance_residual(b, J) < 1e-12
    rng = np.random.default_rng(4)
    for _ in range(5):
        h = HermitianStructure(b, J, random_compatible_metric(J, rng))
        assert np.allclose(chern_ricci_form(h), 0, atol=1e-12)


def test_abelian_J_on_unimodular_gives_zero():
    # h3 + h3 with J pairing e1,e2 / e3,e4 / e5,e6
    b = LieBracket.from_relations(6, [(1, 2, 5, 1.0), (3, 4, 6, 1.0), (1, 2, 6, 0.5)])
    J = ComplexStructure.from_images(6, {1: {2: 1.0}, 3: {4: 1.0}, 5: {6: 1.0}})
    assert abelian_residual(b, J) < 1e-12
    assert np.allclose(np.einsum("ijj->i", b.c), 0)
    rng = np.random.default_rng(4)
    for _ in range(5):
        h = HermitianStructure(b, J, random_compatible_metric(J, rng))
        assert np.allclose(chern_ricci_form(h), 0, atol=1e-12)
