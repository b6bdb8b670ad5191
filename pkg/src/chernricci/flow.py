"""Chern-Ricci flow of left-invariant hermitian structures.

On a Lie group the flow is an ODE for the 2-form with the closed-form
solution ``omega(t) = omega_0((I - 2t P_0) ., .)``.  The equivalent bracket
flow keeps ``(J, omega_0)`` fixed and moves the bracket by
``mu(t) = h(t) . mu_0`` with ``h(t) = (I - 2t P_0)^(1/2)``.  In a
g-orthonormal eigenbasis of ``P_0`` this is a diagonal rescaling of the
structure constants, which also makes the rescaled limits computable
exactly from growth exponents.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .chern import chern_ricci_operator, singular_times
from .errors import DomainError
from .hermitian import HermitianStructure
from .lie import LieBracket, Subspace, _frozen, act_gl, is_abelian_ideal, is_subalgebra
from .tolerances import TOL_ALG


class LimitKind(str, Enum):
    LAMBDA = "lambda_norm"
    NU = "nu_scaled"


class Direction(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True, eq=False)
class FlowSolution:
    """Closed-form solution started at ``initial``.

    ``basis`` holds the g-orthonormal eigenbasis of ``P_0`` in its columns;
    bracket-level outputs are expressed in it unless stated otherwise.
    """

    initial: HermitianStructure
    crd: object
    t_minus: float
    t_plus: float
    basis: np.ndarray
    basis_inv: np.ndarray

    @classmethod
    def start(cls, h):
        d = chern_ricci_operator(h)
        tm, tp = singular_times(d)
        E = d.eigenbasis
        return cls(h, d, tm, tp, _frozen(E), _frozen(np.linalg.inv(E)))

    @property
    def eigenvalues(self):
        return self.crd.eigenvalues

    @property
    def interval(self):
        return self.t_minus, self.t_plus

    def contains(self, t):
        return self.t_minus < t < self.t_plus

    def eigen_structure(self):
        """The initial structure written in the eigenbasis (g becomes I)."""
        return self.initial.in_basis(self.basis)

    def to_original(self, bracket):
        """Rewrite a bracket given in the eigenbasis in the original basis."""
        return act_gl(bracket, self.basis)

    def to_eigen(self, bracket):
        return act_gl(bracket, self.basis_inv)


def solve(h):
    return FlowSolution.start(h)


def _check_time(f, t):
    t = float(t)
    if not np.isfinite(t) or not f.contains(t):
        raise DomainError(f"flow escaped maximal interval: t={t!r} not in ({f.t_minus}, {f.t_plus})")
    return t


def _factors(f, t):
    return 1.0 - 2.0 * t * f.eigenvalues


def metric_at(f, t):
    t = _check_time(f, t)
    h0 = f.initial
    g = h0.g - 2.0 * t * (h0.g @ f.crd.P)
    return h0.with_metric(0.5 * (g + g.T))


def normalized_metric_at(f, t):
    """``omega(t) / (2t + 1)``, the normalized flow up to reparametrization."""
    t = _check_time(f, t)
    if 2.0 * t + 1.0 <= 0.0:
        raise DomainError("normalization needs t > -1/2")
    h = metric_at(f, t)
    return h.with_metric(h.g / (2.0 * t + 1.0))


def operator_at(f, t):
    t = _check_time(f, t)
    n = f.initial.dim
    return np.linalg.solve(np.eye(n) - 2.0 * t * f.crd.P, f.crd.P)


def scalar_curvature_at(f, t):
    t = _check_time(f, t)
    p = f.eigenvalues
    return float(np.sum(p / (1.0 - 2.0 * t * p)))


def isomorphism_at(f, t):
    t = _check_time(f, t)
    return f.basis @ np.diag(np.sqrt(_factors(f, t))) @ f.basis_inv


def _eigen_constants(f):
    return kernels.act_gl(f.initial.bracket.c, f.basis_inv, f.basis)


def bracket_flow_at(f, t, basis="eigen"):
    """``mu(t)``; coefficients in the eigenbasis unless ``basis="original"``."""
    t = _check_time(f, t)
    s = np.sqrt(_factors(f, t))
    mu = LieBracket(_eigen_constants(f) * (s[None, None, :] / np.multiply.outer(s, s)[:, :, None]))
    if basis == "eigen":
        return mu
    if basis == "original":
        return f.to_original(mu)
    raise ValueError(f"unknown basis {basis!r}")


def bracket_norm(b, g=None):
    """``|mu|`` with the unrestricted sum over an orthonormal basis.

    Without ``g`` the coordinates are taken to be orthonormal.
    """
    c = b.c if isinstance(b, LieBracket) else np.asarray(b, float)
    if g is not None:
        # move to an orthonormal frame E = L^-T
        L = np.linalg.cholesky(np.asarray(g, float))
        E = np.linalg.inv(L).T
        c = kernels.act_gl(c, np.linalg.inv(E), E)
    return float(np.sqrt(np.sum(c * c)))


# -- numerical oracles ------------------------------------------------------


def _check_numeric_target(h, t_end, steps):
    if steps < 1:
        raise ValueError("steps must be positive")
    d = chern_ricci_operator(h)
    tm, tp = singular_times(d)
    if not tm < t_end < tp:
        raise DomainError(f"flow escaped maximal interval: t={t_end!r} not in ({tm}, {tp})")


def integrate_crf_numeric(h, t_end, steps):
    """Fixed-step RK4 for ``dg/dt = -2 p(., J.)``, independent of the closed form."""
    _check_numeric_target(h, t_end, steps)
    g, status = kernels.rk4_crf(np.array(h.g), np.array(h.bracket.c), np.array(h.J.J), float(t_end), int(steps))
    if status != kernels.OK:
        raise DomainError("numeric flow left the metric cone")
    return h.with_metric(0.5 * (g + g.T))


def integrate_bracket_flow_numeric(h, t_end, steps):
    """Fixed-step RK4 for ``d mu/dt = delta_mu(P_mu)`` with J, omega_0 frozen.

    The result is expressed in the original basis.
    """
    _check_numeric_target(h, t_end, steps)
    mu, status = kernels.rk4_bracket_flow(
        np.array(h.bracket.c), np.array(h.J.J), np.array(h.g), float(t_end), int(steps)
    )
    if status != kernels.OK:
        raise DomainError("numeric flow left the metric cone")
    return LieBracket(mu)


# -- rescaled limits --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LimitResult:
    """A rescaled limit of the bracket flow, in the eigenbasis of ``P_0``.

    ``bracket`` is ``None`` when the rescaling diverges.  ``degenerate``
    marks the abelian case, where the limit is the zero bracket.
    ``hypothesis`` records the algebraic convergence criterion so it can be
    compared with the exponent analysis that produced ``converged``.
    """

    bracket: LieBracket
    converged: bool
    kind: LimitKind
    direction: Direction
    predicted_P: np.ndarray
    recomputed_P: np.ndarray
    J: np.ndarray
    basis: np.ndarray
    degenerate: bool = False
    hypothesis: bool = None
    max_exponent: float = None
    notes: tuple = field(default_factory=tuple)

    @property
    def residual(self):
        if self.recomputed_P is None or self.predicted_P is None:
            return None
        return float(np.abs(self.recomputed_P - self.predicted_P).max())

    def bracket_original(self):
        if self.bracket is None:
            return None
        return act_gl(self.bracket, self.basis)

    def structure(self):
        """The limit hermitian structure ``(lambda, J, omega_0)`` in the eigenbasis."""
        if self.bracket is None:
            return None
        return HermitianStructure(self.bracket, self.J, np.eye(self.J.shape[0]))


def _growth(f, direction):
    """Per-index ``(gamma, a, finite)`` with ``1 - 2t p_i ~ a_i s^gamma_i``.

    ``s = |t|`` for an infinite endpoint and ``s = 1/|T - t|`` for a finite one.
    """
    p = f.eigenvalues
    plus = direction == Direction.PLUS
    T = f.t_plus if plus else f.t_minus
    gamma = np.zeros(p.size)
    a = np.ones(p.size)
    if np.isinf(T):
        nz = p != 0.0
        gamma[nz] = 1.0
        a[nz] = 2.0 * np.abs(p[nz])
        return gamma, a, False
    extreme = p[-1] if plus else p[0]
    top = p == extreme
    gamma[top] = -1.0
    a[top] = 2.0 * abs(extreme)
    a[~top] = 1.0 - p[~top] / extreme
    return gamma, a, True


def _exponent_table(gamma, a):
    e = 0.5 * (gamma[None, None, :] - gamma[:, None, None] - gamma[None, :, None])
    lead = np.sqrt(a[None, None, :] / (a[:, None, None] * a[None, :, None]))
    return e, lead


def _nonzero_mask(c):
    scale = max(1.0, float(np.abs(c).max())) if c.size else 1.0
    return np.abs(c) > TOL_ALG * scale


def _algebraic_hypothesis(f, c_eig, direction):
    """Convergence criterion for the nu-rescaling stated via subalgebras."""
    p = f.eigenvalues
    n = p.size
    b = LieBracket(c_eig)
    plus = direction == Direction.PLUS
    T = f.t_plus if plus else f.t_minus
    if np.isinf(T):
        k = Subspace.coordinate(n, [i + 1 for i in range(n) if p[i] == 0.0]) if np.any(p == 0.0) else Subspace.zero(n)
        return bool(is_abelian_ideal(b, k))
    extreme = p[-1] if plus else p[0]
    gpm = Subspace.coordinate(n, [i + 1 for i in range(n) if p[i] == extreme])
    return bool(is_subalgebra(b, gpm))


def _recompute(f, bracket):
    J = f.basis_inv @ f.initial.J.J @ f.basis
    h = HermitianStructure(bracket, J, np.eye(J.shape[0]))
    return chern_ricci_operator(h).P, J


def limit_lambda(f, direction=Direction.PLUS):
    """Limit of ``mu(t)/|mu(t)|`` as t tends to the chosen endpoint."""
    direction = Direction(direction)
    c = _eigen_constants(f)
    J = f.basis_inv @ f.initial.J.J @ f.basis
    mask = _nonzero_mask(c)
    if not mask.any():
        return LimitResult(
            None, False, LimitKind.LAMBDA, direction, None, None, J, f.basis,
            degenerate=True, notes=("abelian bracket: mu(t) = 0 has no normalization",),
        )
    gamma, a, _ = _growth(f, direction)
    e, lead = _exponent_table(gamma, a)
    emax = float(e[mask].max())
    keep = mask & (e == emax)
    lam = np.where(keep, c * lead, 0.0)
    N = float(np.sum(lam * lam))
    lam = lam / np.sqrt(N)
    # P_lambda = lim P(t)/|mu|^2; P(t) = diag(p_r / (1 - 2t p_r)) in the eigenbasis
    p = f.eigenvalues
    pred = np.zeros(p.size)
    notes = []
    for r in range(p.size):
        if p[r] == 0.0:
            continue
        expo = -gamma[r] - 2.0 * emax
        if expo == 0.0:
            pred[r] = p[r] / (a[r] * N)
        elif expo > 0.0:
            pred[r] = np.inf
            notes.append(f"P/|mu|^2 diverges on eigenvector {r + 1}")
    bracket = LieBracket(lam)
    P_rec, _ = _recompute(f, bracket)
    return LimitResult(
        bracket, True, LimitKind.LAMBDA, direction, _frozen(np.diag(pred)), _frozen(P_rec), _frozen(J), f.basis,
        hypothesis=None, max_exponent=emax, notes=tuple(notes),
    )


def limit_nu(f, direction=Direction.PLUS):
    """Limit of ``|2t+1|^(1/2) mu(t)`` (infinite endpoint) or ``|T-t|^(1/2) mu(t)``."""
    direction = Direction(direction)
    c = _eigen_constants(f)
    J = f.basis_inv @ f.initial.J.J @ f.basis
    mask = _nonzero_mask(c)
    gamma, a, finite = _growth(f, direction)
    e, lead = _exponent_table(gamma, a)
    hyp = _algebraic_hypothesis(f, c, direction)
    n = c.shape[0]
    if not mask.any():
        zero = LieBracket.abelian(n)
        return LimitResult(
            zero, True, LimitKind.NU, direction, np.zeros((n, n)), np.zeros((n, n)), _frozen(J), f.basis,
            degenerate=True, hypothesis=hyp, max_exponent=-np.inf,
            notes=("abelian bracket: the limit is the zero bracket",),
        )
    shift = -0.5 if finite else 0.5
    coef = 1.0 if finite else np.sqrt(2.0)
    e = e + shift
    emax = float(e[mask].max())
    if emax > 0.0:
        return LimitResult(
            None, False, LimitKind.NU, direction, None, None, _frozen(J), f.basis,
            hypothesis=hyp, max_exponent=emax,
        )
    nu = np.where(mask & (e == 0.0), coef * c * lead, 0.0)
    p = f.eigenvalues
    if finite:
        extreme = p[-1] if direction == Direction.PLUS else p[0]
        diag = np.where(p == extreme, 0.5 if direction == Direction.PLUS else -0.5, 0.0)
    else:
        diag = np.where(p != 0.0, -1.0 if direction == Direction.PLUS else 1.0, 0.0)
    bracket = LieBracket(nu)
    P_rec, _ = _recompute(f, bracket)
    return LimitResult(
        bracket, True, LimitKind.NU, direction, _frozen(np.diag(diag)), _frozen(P_rec), _frozen(J), f.basis,
        degenerate=bracket.is_abelian(), hypothesis=hyp, max_exponent=emax,
    )


def lambda_limit_formula(f, direction=Direction.PLUS):
    """Nonzero diagonal value of ``P_lambda`` from the explicit sums over eigenvalues.

    Independent of the exponent bookkeeping and used to cross-check it; the
    value is ``0`` whenever the relevant algebraic hypothesis fails.
    """
    direction = Direction(direction)
    c = _eigen_constants(f)
    p = f.eigenvalues
    sgn = 1.0 if direction == Direction.PLUS else -1.0
    q = sgn * p  # reduce the minus statement to the plus one
    T = f.t_plus if direction == Direction.PLUS else f.t_minus
    mask = _nonzero_mask(c)
    n = p.size
    if np.isinf(T):
        if not _algebraic_hypothesis(f, c, direction):
            return 0.0
        s = 0.0
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if not mask[i, j, k]:
                        continue
                    if q[i] < 0 and q[j] < 0 and q[k] < 0:
                        s += q[k] / (q[i] * q[j]) * c[i, j, k] ** 2
                    elif q[i] < 0 and q[j] == 0 and q[k] == 0:
                        s += 2.0 / q[i] * c[i, j, k] ** 2
        return sgn / s
    if not _algebraic_hypothesis(f, c, direction):
        return 0.0
    top = q.max()
    s = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not mask[i, j, k]:
                    continue
                if q[i] == top and q[j] == top and q[k] == top:
                    s += c[i, j, k] ** 2
                elif q[j] == top and q[i] != top and q[k] != top:
                    s += 2.0 * (top - q[k]) / (top - q[i]) * c[i, j, k] ** 2
    return sgn * top / s
