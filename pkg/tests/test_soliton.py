import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from chernricci.almost_abelian import middle_J, realify
from chernricci.chern import chern_ricci_operator
from chernricci.errors import InvariantViolation
from chernricci.flow import metric_at, solve
from chernricci.hermitian import ComplexStructure, HermitianStructure, is_kahler
from chernricci.lie import LieBracket
from chernricci.soliton import (
    build_semidirect,
    certify,
    definition_form_residual,
    self_similar_time,
    soliton_evolution_check,
)

from conftest import catalog_instances, structure

R2 = HermitianStructure(
    LieBracket.from_relations(2, [(1, 2, 2, 1.0)]), ComplexStructure.from_images(2, {1: {2: 1.0}}), np.eye(2)
)


def test_d412_kahler_einstein():
    h = structure("d_4,1/2", variant=1)
    cert = certify(h)
    assert cert.is_soliton and cert.kind == "expanding"
    assert cert.c == pytest.approx(-1.5)
    assert np.allclose(cert.D, 0)
    assert is_kahler(h)


@pytest.mark.parametrize("alpha", [-0.5, 0.3, 1.0])
def test_r4_alpha_1(alpha):
    cert = certify(structure("r_4,alpha,1", alpha=alpha))
    k = alpha * (alpha + 1)
    assert cert.is_soliton
    assert cert.c == pytest.approx(-k)
    assert np.allclose(cert.D, k * np.diag([1.0, 0, 1, 0]))


def test_r2_prime_not_soliton():
    cert = certify(structure("r'_2", J="J1"))
    assert not cert.is_soliton
    assert not cert.checks["spectrum"]
    assert "spectrum" in cert.witness


def test_fixed_point_is_steady():
    cert = certify(structure("rh_3"))
    assert cert.is_soliton and cert.c == 0.0 and cert.kind == "steady"
    assert not cert.D.any()


def test_seven_non_soliton_rows():
    rows = [
        ("r'_2", None, "J1", {}),
        ("r_4,1", None, None, {}),
        ("d_4", 2, "J2", {}),
        ("d_4,1/2", 2, "J2", {}),
        ("d'_4,delta", None, "J1", {"delta": 1.0}),
        ("d'_4,delta", None, "J2", {"delta": 0.7}),
        ("h_4", None, None, {}),
    ]
    for name, variant, J, params in rows:
        cert = certify(structure(name, variant, J, **params))
        assert not cert.is_soliton, name
        assert cert.witness


def test_certificates_on_catalog():
    for entry, params, inst in catalog_instances(samples=3):
        h = inst.structure
        cert = certify(h)
        if not cert.is_soliton:
            continue
        P = chern_ricci_operator(h).P
        assert np.allclose(P, cert.c * np.eye(4) + cert.D, atol=1e-9)
        assert definition_form_residual(h, cert) <= 1e-9
        assert cert.checks["derivation"] and cert.checks["commutes_with_J"]
        if cert.c != 0.0:
            assert cert.checks["kernel_abelian_ideal"] and cert.checks["eigenspace_subalgebra"]


def test_self_similar_time():
    assert self_similar_time(0.0, 0.7) == 0.7
    assert self_similar_time(-1.0, 1.0) == pytest.approx(np.log(3.0) / 2.0)


def test_evolution_r2r2():
    h = structure("r_2r_2")
    cert = certify(h)
    assert cert.c == pytest.approx(-1.0)
    for t in (0.0, 0.5, 2.0):
        assert np.allclose(metric_at(solve(h), t).omega, (2 * t + 1) * h.omega)
        assert soliton_evolution_check(h, cert, t)


def test_evolution_d41():
    h = structure("d_4,1")
    cert = certify(h)
    assert cert.c == pytest.approx(-2.0)
    assert np.allclose(cert.D, np.diag([0.0, 2, 2, 0]))
    chk = soliton_evolution_check(h, cert, 1.0)
    assert chk and chk.residual < 1e-12
    # the opposite pullback sign does not solve the flow
    s = self_similar_time(cert.c, 1.0)
    M = expm(s * cert.D)
    wrong = 3.0 * (M.T @ h.omega @ M)
    assert not np.allclose(wrong, metric_at(solve(h), 1.0).omega)


def test_evolution_rejects_non_soliton():
    h = structure("r'_2", J="J1")
    with pytest.raises(ValueError):
        soliton_evolution_check(h, certify(h), 0.1)


def test_semidirect_product_theta_zero():
    res = build_semidirect(R2, 2, ComplexStructure.from_images(2, {1: {2: 1.0}}), np.array([[0, 1.0], [-1, 0]]), np.zeros((2, 2, 2)))
    assert res.c == pytest.approx(-1.0)
    assert res.certificate.is_soliton and res.certificate.c == pytest.approx(-1.0)
    assert np.allclose(res.P_theta, 0)
    P = chern_ricci_operator(res.structure).P
    assert np.allclose(P, np.diag([-1.0, -1, 0, 0]))
    assert res.kahler


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_semidirect_sl_representation(a, b, c):
    # theta(e1) in sl(2, C) acting on C^2, theta(e2) = 0
    Z = np.array([[a, b], [c, -a]])
    J2 = middle_J(3)
    theta = np.stack([realify(Z), np.zeros((4, 4))])
    res = build_semidirect(R2, 4, J2, J2.T, theta)
    assert np.allclose(res.P_theta, 0, atol=1e-10)
    cert = res.certificate
    assert cert.is_soliton and cert.c == pytest.approx(-1.0)
    P = chern_ricci_operator(res.structure).P
    assert np.allclose(P[:2, :2], -np.eye(2), atol=1e-9)
    assert np.allclose(P[2:, 2:], 0, atol=1e-9)


def test_semidirect_degenerate():
    res = build_semidirect(R2, 0, None, None, None)
    assert res.structure is R2
    assert res.certificate.is_soliton


def test_semidirect_errors():
    J2 = ComplexStructure.from_images(2, {1: {2: 1.0}})
    W2 = np.array([[0, 1.0], [-1, 0]])
    # [e1, e2] = e2 forces theta(e2) = [theta(e1), theta(e2)] = 0 here
    bad = np.stack([np.zeros((2, 2)), np.array([[1.0, 0], [0, 0]])])
    with pytest.raises(InvariantViolation, match="representation"):
        build_semidirect(R2, 2, J2, W2, bad)
    # a J-anti-commuting theta(e1) breaks the compatibility bullet
    anti = np.stack([np.diag([1.0, -1.0]), np.zeros((2, 2))])
    with pytest.raises(InvariantViolation, match=r"\[theta\(J1 X\), J2\]"):
        build_semidirect(R2, 2, J2, W2, anti)
    h1 = structure("rr_3,0")
    with pytest.raises(InvariantViolation, match="P_1 = cI - P_theta"):
        build_semidirect(h1, 2, J2, W2, np.zeros((4, 2, 2)))
