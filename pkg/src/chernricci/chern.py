"""Chern-Ricci form and operator of a left-invariant hermitian structure."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ChernRicciError, InvariantViolation
from .lie import Subspace, _frozen
from .tolerances import EIGEN_TOL, TOL_EIG


def chern_ricci_form(h):
    """``p(X, Y) = -1/2 tr(J ad[X,Y]) + 1/2 tr(ad J[X,Y])``; depends on J only."""
    return kernels.chern_form(h.bracket.c, h.J.J)


def chern_ricci_operator_matrix(bracket, J, omega):
    """Solve ``p = omega(P., .)`` for P, i.e. ``P = Omega^-1 p``."""
    p = kernels.chern_form(bracket.c, J)
    return np.linalg.solve(omega, p)


def symmetric_eigen(S, tol=EIGEN_TOL):
    """Eigenpairs of a symmetric matrix by cyclic Jacobi, ascending order."""
    S = 0.5 * (np.asarray(S, float) + np.asarray(S, float).T)
    w, V, _ = kernels.jacobi_eigh(S, tol, 64)
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def cluster_values(values, tol=TOL_EIG):
    """Group sorted values whose gaps are within ``tol``; values near 0 snap to 0.

    Returns a list of ``(representative, [indices])``.
    """
    values = np.asarray(values, float)
    scale = max(1.0, float(np.abs(values).max())) if values.size else 1.0
    tol = tol * scale
    clusters = []
    for idx in np.argsort(values, kind="stable"):
        v = values[idx]
        if clusters and abs(v - values[clusters[-1][-1]]) <= tol:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])
    out = []
    for members in clusters:
        rep = float(np.mean(values[members]))
        if abs(rep) <= tol:
            rep = 0.0
        out.append((rep, members))
    return out


def _canonical_cluster_basis(Ec, g):
    """Deterministic g-orthonormal basis of span(Ec).

    Coordinate vectors are projected g-orthogonally onto the span and
    orthonormalized in order, so eigenspaces that are coordinate planes
    come back as (scaled) coordinate vectors.
    """
    r = Ec.shape[1]
    proj = Ec @ Ec.T @ g
    out = []
    for v in proj.T:
        w = v.copy()
        for _ in range(2):
            for q in out:
                w -= (q @ g @ w) * q
        nrm = np.sqrt(max(w @ g @ w, 0.0))
        if nrm > 1e-6:
            out.append(w / nrm)
        if len(out) == r:
            break
    if len(out) < r:
        return Ec
    return np.column_stack(out)


def generalized_eigen(P, g, tol_eig=TOL_EIG):
    """Eigen-decomposition of a g-self-adjoint P in a g-orthonormal frame.

    ``g = L L^T`` reduces the problem to the symmetric ``L^T P L^-T``.
    """
    L = np.linalg.cholesky(g)
    Linv = np.linalg.inv(L)
    S = L.T @ P @ Linv.T
    w, Q = symmetric_eigen(S)
    E = Linv.T @ Q
    clusters = cluster_values(w, tol_eig)
    vals = np.empty_like(w)
    cols = []
    for rep, members in clusters:
        B = _canonical_cluster_basis(E[:, members], g)
        for k in range(B.shape[1]):
            col = B[:, k]
            if col[np.argmax(np.abs(col))] < 0:
                col = -col
            cols.append(col)
        vals[len(cols) - B.shape[1] : len(cols)] = rep
    return vals, np.column_stack(cols), w


@dataclass(frozen=True, eq=False)
class ChernRicciData:
    """p, P and the spectral data of P in a g-orthonormal eigenbasis.

    ``eigenvalues`` are ascending and snapped to their cluster value;
    ``raw_eigenvalues`` keeps the unsnapped Jacobi output.
    """

    p: np.ndarray
    P: np.ndarray
    eigenvalues: np.ndarray
    eigenbasis: np.ndarray
    raw_eigenvalues: np.ndarray
    clusters: tuple
    g: np.ndarray

    @property
    def dim(self):
        return self.P.shape[0]

    @property
    def is_zero(self):
        return all(v == 0.0 for v, _ in self.clusters)

    @property
    def p_plus(self):
        v = self.eigenvalues[-1]
        return float(v) if v > 0 else None

    @property
    def p_minus(self):
        v = self.eigenvalues[0]
        return float(v) if v < 0 else None

    def distinct_values(self):
        return [v for v, _ in self.clusters]


def chern_ricci_operator(h, tol_eig=TOL_EIG):
    p = chern_ricci_form(h)
    om = h.omega
    try:
        P = np.linalg.solve(om, p)
    except np.linalg.LinAlgError:
        raise ChernRicciError("degenerate omega") from None
    vals, E, raw = generalized_eigen(P, h.g, tol_eig)
    clusters = tuple((v, tuple(m)) for v, m in cluster_values(vals, tol_eig))
    return ChernRicciData(
        p=_frozen(p),
        P=_frozen(P),
        eigenvalues=_frozen(vals),
        eigenbasis=_frozen(E),
        raw_eigenvalues=_frozen(raw),
        clusters=clusters,
        g=_frozen(h.g),
    )


def singular_times(d, tol_eig=TOL_EIG):
    """Maximal existence interval ``(T_-, T_+)`` of the Chern-Ricci flow."""
    scale = max(1.0, float(np.abs(d.eigenvalues).max()))
    top, bottom = float(d.eigenvalues[-1]), float(d.eigenvalues[0])
    t_plus = np.inf if top <= tol_eig * scale else 1.0 / (2.0 * top)
    t_minus = -np.inf if bottom >= -tol_eig * scale else 1.0 / (2.0 * bottom)
    return t_minus, t_plus


def eigenspace(d, value, tol_eig=TOL_EIG):
    scale = max(1.0, float(np.abs(d.eigenvalues).max()))
    idx = [i for i, v in enumerate(d.eigenvalues) if abs(v - value) <= tol_eig * scale]
    if not idx:
        raise InvariantViolation(f"{value!r} is not an eigenvalue of P")
    return Subspace(d.eigenbasis[:, idx], d.dim)


def kernel_of(d):
    """Ker P (possibly zero)."""
    idx = [i for i, v in enumerate(d.eigenvalues) if v == 0.0]
    return Subspace(d.eigenbasis[:, idx].reshape(d.dim, len(idx)), d.dim)
