"""numba twins of the kernels in ``_numpy``.

Loops are written out explicitly; shapes never exceed a few dozen so the
triple and quadruple loops are cheap once compiled.
"""
import numpy as np
from numba import njit

OK = 0
LEFT_CONE = 1


@njit(cache=True)
def antisymmetry_residual(c):
    n = c.shape[0]
    r = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = abs(c[i, j, k] + c[j, i, k])
                if v > r:
                    r = v
    return r


@njit(cache=True)
def jacobi_residual(c):
    n = c.shape[0]
    r = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    s = 0.0
                    for m in range(n):
                        s += c[i, j, m] * c[m, k, l] + c[j, k, m] * c[m, i, l] + c[k, i, m] * c[m, j, l]
                    if abs(s) > r:
                        r = abs(s)
    return r


@njit(cache=True)
def _chern_weights(c, J):
    n = c.shape[0]
    w = np.zeros(n)
    v = np.zeros(n)
    for a in range(n):
        u = 0.0
        tr = 0.0
        for l in range(n):
            tr += c[a, l, l]
            for k in range(n):
                u += J[l, k] * c[a, l, k]
        w[a] = -0.5 * u
        v[a] = tr
    for a in range(n):
        s = 0.0
        for b in range(n):
            s += J[b, a] * v[b]
        w[a] += 0.5 * s
    return w


@njit(cache=True)
def chern_form(c, J):
    n = c.shape[0]
    w = _chern_weights(c, J)
    p = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            s = 0.0
            for k in range(n):
                s += c[i, j, k] * w[k]
            p[i, j] = s
    return p


@njit(cache=True)
def act_gl(c, h, hinv):
    n = c.shape[0]
    # contract one index at a time: O(n^4)
    t1 = np.zeros((n, n, n))
    for a in range(n):
        for b in range(n):
            for k in range(n):
                s = 0.0
                for r in range(n):
                    s += h[k, r] * c[a, b, r]
                t1[a, b, k] = s
    t2 = np.zeros((n, n, n))
    for a in range(n):
        for j in range(n):
            for k in range(n):
                s = 0.0
                for b in range(n):
                    s += hinv[b, j] * t1[a, b, k]
                t2[a, j, k] = s
    out = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s = 0.0
                for a in range(n):
                    s += hinv[a, i] * t2[a, j, k]
                out[i, j, k] = s
    return out


@njit(cache=True)
def _bracket(c, x, y):
    n = c.shape[0]
    out = np.zeros(n)
    for a in range(n):
        if x[a] == 0.0:
            continue
        for b in range(n):
            xy = x[a] * y[b]
            if xy == 0.0:
                continue
            for k in range(n):
                out[k] += xy * c[a, b, k]
    return out


@njit(cache=True)
def integrability_residual(c, J):
    n = c.shape[0]
    r = 0.0
    eye = np.eye(n)
    for i in range(n):
        for j in range(n):
            x = eye[:, i].copy()
            y = eye[:, j].copy()
            jx = J @ x
            jy = J @ y
            v = _bracket(c, jx, jy) - _bracket(c, x, y) - J @ (_bracket(c, jx, y) + _bracket(c, x, jy))
            for k in range(n):
                if abs(v[k]) > r:
                    r = abs(v[k])
    return r


@njit(cache=True)
def delta(mu, A):
    n = mu.shape[0]
    out = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s = 0.0
                for a in range(n):
                    s += A[a, i] * mu[a, j, k] + A[a, j] * mu[i, a, k] - A[k, a] * mu[i, j, a]
                out[i, j, k] = s
    return out


@njit(cache=True)
def derivation_residual(c, D):
    r = delta(c, D)
    m = 0.0
    for v in r.ravel():
        if abs(v) > m:
            m = abs(v)
    return m


@njit(cache=True)
def _is_pd(g):
    n = g.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        s = 0.5 * (g[j, j] + g[j, j])
        for k in range(j):
            s -= L[j, k] * L[j, k]
        if not s > 0.0:
            return False
        L[j, j] = np.sqrt(s)
        for i in range(j + 1, n):
            s = 0.5 * (g[i, j] + g[j, i])
            for k in range(j):
                s -= L[i, k] * L[j, k]
            L[i, j] = s / L[j, j]
    return True


@njit(cache=True)
def rk4_crf(g0, c, J, t_end, steps):
    h = t_end / steps
    g = g0.copy()
    for _ in range(steps):
        k1 = -2.0 * chern_form(c, J) @ J
        k2 = -2.0 * chern_form(c, J) @ J
        k3 = -2.0 * chern_form(c, J) @ J
        k4 = -2.0 * chern_form(c, J) @ J
        g = g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not _is_pd(g):
            return g, LEFT_CONE
    return g, OK


@njit(cache=True)
def _bf_rhs(m, J, omega_inv):
    return delta(m, omega_inv @ chern_form(m, J))


@njit(cache=True)
def rk4_bracket_flow(c0, J, g0, t_end, steps):
    h = t_end / steps
    omega_inv = np.linalg.inv(J.T @ g0)
    mu = c0.copy()
    for _ in range(steps):
        k1 = _bf_rhs(mu, J, omega_inv)
        k2 = _bf_rhs(mu + 0.5 * h * k1, J, omega_inv)
        k3 = _bf_rhs(mu + 0.5 * h * k2, J, omega_inv)
        k4 = _bf_rhs(mu + h * k3, J, omega_inv)
        mu = mu + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(mu)):
            return mu, LEFT_CONE
    return mu, OK


@njit(cache=True)
def jacobi_eigh(S, tol=1e-12, max_sweeps=64):
    n = S.shape[0]
    A = S.copy()
    V = np.eye(n)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += A[i, j] * A[i, j]
    scale = np.sqrt(scale)
    if scale == 0.0:
        return np.zeros(n), V, 0
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i, j] * A[i, j]
        if np.sqrt(off) <= tol * scale:
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
                    sgn = 1.0 if tau >= 0 else -1.0
                    t = sgn / (abs(tau) + np.sqrt(1.0 + tau * tau))
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * cs
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = cs * akp - sn * akq
                    A[k, q] = sn * akp + cs * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = cs * apk - sn * aqk
                    A[q, k] = sn * apk + cs * aqk
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = cs * vkp - sn * vkq
                    V[k, q] = sn * vkp + cs * vkq
    return np.diag(A).copy(), V, sweeps
