"""Pure-numpy reference kernels.

Structure constants are stored 0-based as ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k``.  Every function here has a numba
twin in ``_numba`` with an identical signature and return convention.
"""
import numpy as np

# status codes returned by the integrators
OK = 0
LEFT_CONE = 1


def antisymmetry_residual(c):
    if c.size == 0:
        return 0.0
    return float(np.abs(c + c.transpose(1, 0, 2)).max())


def jacobi_residual(c):
    if c.size == 0:
        return 0.0
    t = np.einsum("ijm,mkl->ijkl", c, c)
    cyc = t + np.einsum("jkil->ijkl", t) + np.einsum("kijl->ijkl", t)
    return float(np.abs(cyc).max())


def chern_form(c, J):
    """Matrix of p(e_i, e_j) = -1/2 tr(J ad[e_i,e_j]) + 1/2 tr(ad J[e_i,e_j])."""
    # tr(J ad_x) = x.u and tr(ad_x) = x.v, so p[i, j] = c[i, j, :] . w
    u = np.einsum("lk,alk->a", J, c)
    v = np.einsum("akk->a", c)
    w = -0.5 * u + 0.5 * (J.T @ v)
    return c @ w


def act_gl(c, h, hinv):
    """Structure constants of h.[.,.] = h[h^-1 ., h^-1 .]."""
    return np.einsum("ai,bj,abr,kr->ijk", hinv, hinv, c, h, optimize=True)


def integrability_residual(c, J):
    jj = np.einsum("ai,bj,abk->ijk", J, J, c)
    left = np.einsum("ai,ajk->ijk", J, c)
    right = np.einsum("bj,ibk->ijk", J, c)
    n = jj - c - np.einsum("mk,ijk->ijm", J, left + right)
    return float(np.abs(n).max()) if n.size else 0.0


def delta(mu, A):
    """delta_mu(A) = mu(A., .) + mu(., A.) - A mu(., .)."""
    return (
        np.einsum("ai,ajk->ijk", A, mu)
        + np.einsum("bj,ibk->ijk", A, mu)
        - np.einsum("km,ijm->ijk", A, mu)
    )


def derivation_residual(c, D):
    r = delta(c, D)
    return float(np.abs(r).max()) if r.size else 0.0


def _is_pd(g):
    try:
        np.linalg.cholesky(0.5 * (g + g.T))
    except np.linalg.LinAlgError:
        return False
    return True


def rk4_crf(g0, c, J, t_end, steps):
    """Integrate dg/dt = -2 p(., J.) with the classical four-stage scheme."""
    h = t_end / steps
    g = g0.copy()

    def rhs(_g):
        # p does not see the metric on a Lie group; recomputed per stage anyway
        return -2.0 * chern_form(c, J) @ J

    for _ in range(steps):
        k1 = rhs(g)
        k2 = rhs(g + 0.5 * h * k1)
        k3 = rhs(g + 0.5 * h * k2)
        k4 = rhs(g + h * k3)
        g = g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not _is_pd(g):
            return g, LEFT_CONE
    return g, OK


def rk4_bracket_flow(c0, J, g0, t_end, steps):
    """Integrate d mu/dt = delta_mu(P_mu) with J and omega_0 held fixed."""
    h = t_end / steps
    omega_inv = np.linalg.inv(J.T @ g0)
    mu = c0.copy()

    def rhs(m):
        return delta(m, omega_inv @ chern_form(m, J))

    for _ in range(steps):
        k1 = rhs(mu)
        k2 = rhs(mu + 0.5 * h * k1)
        k3 = rhs(mu + 0.5 * h * k2)
        k4 = rhs(mu + h * k3)
        mu = mu + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(mu)):
            return mu, LEFT_CONE
    return mu, OK


def jacobi_eigh(S, tol=1e-12, max_sweeps=64):
    """Cyclic Jacobi rotations on a symmetric matrix.

    Returns ``(w, V, sweeps)`` with ``S V = V diag(w)``, unsorted.
    """
    A = np.array(S, dtype=float, copy=True)
    n = A.shape[0]
    V = np.eye(n)
    scale = np.sqrt((A * A).sum())
    if scale == 0.0:
        return np.zeros(n), V, 0
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = np.sqrt(((A - np.diag(np.diag(A))) ** 2).sum())
        if off <= tol * scale:
            return np.diag(A).copy(), V, sweeps - 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * cs
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = cs * colp - sn * colq
                A[:, q] = sn * colp + cs * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = cs * rowp - sn * rowq
                A[q, :] = sn * rowp + cs * rowq
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = cs * vp - sn * vq
                V[:, q] = sn * vp + cs * vq
    return np.diag(A).copy(), V, sweeps
