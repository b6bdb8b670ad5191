"""Chern-Ricci soliton certificates and the semidirect-product constructor."""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .chern import chern_ricci_operator, eigenspace, kernel_of
from .errors import DomainError, InvariantViolation
from .flow import metric_at, solve
from .hermitian import ComplexStructure, HermitianStructure, d_omega
from .lie import Check, LieBracket, Subspace, _frozen, is_abelian_ideal, is_derivation, is_subalgebra
from .tolerances import TOL_ALG


@dataclass(frozen=True, eq=False)
class SolitonCertificate:
    """Outcome of testing ``P = cI + D`` with D a derivation commuting with J.

    ``checks`` maps each condition to a :class:`Check`; ``witness`` names the
    first failed one.  ``c`` and ``D`` are filled in whenever the spectrum
    allows a candidate, even if a later condition fails.
    """

    is_soliton: bool
    c: float = None
    D: np.ndarray = None
    checks: dict = field(default_factory=dict)
    witness: str = None

    @property
    def kind(self):
        if not self.is_soliton:
            return None
        if self.c < 0:
            return "expanding"
        return "steady" if self.c == 0 else "shrinking"


def _scaled_tol(*arrays):
    s = max([1.0] + [float(np.abs(a).max()) for a in arrays if np.size(a)])
    return TOL_ALG * s * s


_ORDER = ("spectrum", "derivation", "commutes_with_J", "kernel_abelian_ideal", "eigenspace_subalgebra")


def certify(h):
    d = chern_ricci_operator(h)
    n = h.dim
    if d.is_zero:
        checks = {k: Check(True, 0.0) for k in _ORDER}
        return SolitonCertificate(True, 0.0, _frozen(np.zeros((n, n))), checks)
    nonzero = [v for v in d.distinct_values() if v != 0.0]
    if len(nonzero) > 1:
        spread = max(nonzero) - min(nonzero)
        return SolitonCertificate(
            False, checks={"spectrum": Check(False, spread)},
            witness=f"spectrum has {len(nonzero)} distinct nonzero eigenvalues {sorted(nonzero)}",
        )
    c = nonzero[0]
    D = d.P - c * np.eye(n)
    b = h.bracket
    J = h.J.J
    checks = {"spectrum": Check(True, 0.0)}
    checks["derivation"] = is_derivation(b, D)
    r = float(np.abs(D @ J - J @ D).max())
    checks["commutes_with_J"] = Check(r <= _scaled_tol(D, J), r)
    checks["kernel_abelian_ideal"] = _as_check(is_abelian_ideal(b, kernel_of(d)))
    checks["eigenspace_subalgebra"] = _as_check(is_subalgebra(b, eigenspace(d, c)))
    witness = next((k for k in _ORDER if k in checks and not checks[k]), None)
    return SolitonCertificate(witness is None, float(c), _frozen(D), checks, witness)


def _as_check(v):
    return v if isinstance(v, Check) else Check(bool(v), 0.0 if v else float("nan"))


def definition_form_residual(h, cert):
    """Size of ``P - cI - (D + D*)/2`` with ``D*`` the g-adjoint of D."""
    P = chern_ricci_operator(h).P
    g = h.g
    Dstar = np.linalg.solve(g, cert.D.T @ g)
    return float(np.abs(P - cert.c * np.eye(h.dim) - 0.5 * (cert.D + Dstar)).max())


def self_similar_time(c, t):
    """``s(t)`` with ``omega(t) = (1 - 2ct) (e^{-s(t) D})^* omega_0``."""
    if c == 0.0:
        return float(t)
    return float(np.log1p(-2.0 * c * t) / (-2.0 * c))


def soliton_evolution_check(h, cert, t, tol=None):
    """Compare the flow at time t with the self-similar form of a soliton.

    The pullback uses ``e^{-s D}``: for ``P = cI + D`` this is the sign that
    makes ``(1 - 2ct) (e^{-sD})^* omega_0`` solve the flow.
    """
    if not cert.is_soliton:
        raise ValueError("certificate is not a soliton")
    f = solve(h)
    wt = metric_at(f, t).omega
    c = cert.c
    s = self_similar_time(c, t)
    M = expm(-s * np.asarray(cert.D))
    rhs = (1.0 - 2.0 * c * t) * (M.T @ h.omega @ M)
    r = float(np.abs(wt - rhs).max())
    scale = max(1.0, float(np.abs(wt).max()))
    if tol is None:
        tol = TOL_ALG
    return Check(r <= tol * scale, r)


# -- semidirect products --------------------------------------------------


@dataclass(frozen=True, eq=False)
class SemidirectResult:
    structure: HermitianStructure
    certificate: SolitonCertificate
    P_theta: np.ndarray
    c: float
    kahler: bool


def _theta_of(theta, x):
    return np.tensordot(np.asarray(x, float), theta, axes=1)


def build_semidirect(h1, dim2, J2, omega2, theta, c=None):
    """Hermitian structure on ``g1 x| g2`` with g2 abelian acted on by theta.

    ``theta[a]`` is the matrix of ``theta(e_{a+1})`` on g2.  Raises
    :class:`InvariantViolation` naming the failed hypothesis.
    """
    n1 = h1.dim
    if dim2 == 0:
        return SemidirectResult(h1, certify(h1), np.zeros((n1, n1)), c, bool(_kahler_1(h1)))
    if dim2 % 2:
        raise InvariantViolation("g2 must have even dimension")
    J2 = J2 if isinstance(J2, ComplexStructure) else ComplexStructure(J2)
    W2 = np.asarray(omega2, float)
    th = np.asarray(theta, float).reshape(n1, dim2, dim2)
    J1 = h1.J.J
    c1 = h1.bracket.c

    tol = _scaled_tol(th, c1) * max(1.0, float(np.abs(th).max()))
    # theta[X, Y] = [theta X, theta Y]
    rep = np.einsum("abk,kij->abij", c1, th) - (
        np.einsum("aij,bjl->abil", th, th) - np.einsum("bij,ajl->abil", th, th)
    )
    r = float(np.abs(rep).max())
    if r > tol:
        raise InvariantViolation("theta is not a representation", r)
    # [theta(J1 X), J2] = J2 [theta(X), J2]
    JJ = J2.J
    thJ = np.einsum("ka,kij->aij", J1, th)
    lhs = thJ @ JJ - JJ @ thJ
    rhs = JJ @ (th @ JJ - JJ @ th)
    r = float(np.abs(lhs - rhs).max())
    if r > tol:
        raise InvariantViolation("[theta(J1 X), J2] = J2 [theta(X), J2]", r)

    n = n1 + dim2
    c_full = np.zeros((n, n, n))
    c_full[:n1, :n1, :n1] = c1
    # [e_a, v_i] = theta(e_a) v_i
    for a in range(n1):
        c_full[a, n1:, n1:] = th[a].T
        c_full[n1:, a, n1:] = -th[a].T
    J = np.zeros((n, n))
    J[:n1, :n1] = J1
    J[n1:, n1:] = JJ
    W = np.zeros((n, n))
    W[:n1, :n1] = h1.omega
    W[n1:, n1:] = W2
    h = HermitianStructure.from_omega(LieBracket(c_full), ComplexStructure(J), W)

    # omega_1(P_theta X, Y) = -1/2 tr(J2 theta[X,Y]) + 1/2 tr(theta(J1 [X,Y]))
    tr_J2 = np.einsum("ij,aji->a", JJ, th)
    tr_th = np.einsum("aii->a", th)
    w = -0.5 * tr_J2 + 0.5 * (J1.T @ tr_th)
    q = c1 @ w
    P_theta = np.linalg.solve(h1.omega, q)
    P1 = chern_ricci_operator(h1).P
    S = P1 + P_theta
    if c is None:
        c = float(np.trace(S) / n1)
    r = float(np.abs(S - c * np.eye(n1)).max())
    if r > _scaled_tol(S):
        raise InvariantViolation("P_1 = cI - P_theta", r)

    sp = np.einsum("aji,jk->aik", th, W2) + np.einsum("ij,ajk->aik", W2, th)
    kahler = bool(_kahler_1(h1)) and float(np.abs(sp).max()) <= tol
    return SemidirectResult(h, certify(h), _frozen(P_theta), float(c), kahler)


def _kahler_1(h1):
    dw = d_omega(h1)
    return (float(np.abs(dw).max()) if dw.size else 0.0) <= _scaled_tol(h1.bracket.c, h1.g)
