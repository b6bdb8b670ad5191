"""Almost-abelian hermitian Lie algebras ``mu_{A,c,d}``.

Basis ``e_1, ..., e_2n`` is orthonormal, ``n = span(e_1, ..., e_{2n-1})``
is an abelian ideal and ``J e_i = e_{2n+1-i}`` for ``i <= n``.  The whole
bracket is ``ad e_2n`` restricted to n::

    [ c  0 ]
    [ d  A ]

with ``A`` acting on ``e_2, ..., e_{2n-1}`` and commuting with J there.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation
from .hermitian import ComplexStructure, HermitianStructure
from .lie import LieBracket, _frozen, center, derived_algebra, is_two_step_nilpotent
from .tolerances import TOL_ALG


def normal_form_J(n):
    """``J e_i = e_{2n+1-i}`` for ``i <= n`` (so ``J e_{2n+1-i} = -e_i``)."""
    m = 2 * n
    J = np.zeros((m, m))
    for i in range(n):
        J[m - 1 - i, i] = 1.0
        J[i, m - 1 - i] = -1.0
    return J


def middle_J(n):
    """J restricted to ``span(e_2, ..., e_{2n-1})``."""
    return normal_form_J(n)[1:-1, 1:-1]


def realify(Z):
    """Real matrix on ``e_2..e_{2n-1}`` of a complex (n-1)x(n-1) matrix.

    The complex coordinate ``z_m`` pairs ``e_{m+2}`` with ``J e_{m+2}``.
    """
    Z = np.atleast_2d(np.asarray(Z, complex))
    k = Z.shape[0]
    X, Y = Z.real, Z.imag
    R = np.block([[X, -Y], [Y, X]])
    # second half of the block is J e_2, ..., J e_{n}, i.e. e_{2n-1}, ..., e_{n+1}
    order = list(range(k)) + list(range(2 * k - 1, k - 1, -1))
    Q = np.zeros((2 * k, 2 * k))
    for blk, std in enumerate(order):
        Q[std, blk] = 1.0
    return Q @ R @ Q.T


@dataclass(frozen=True, eq=False)
class AlmostAbelianSpec:
    n: int
    A: np.ndarray
    c: float
    d: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise InvariantViolation("n must be at least 1")
        m = 2 * n - 2
        A = _frozen(np.asarray(self.A, float).reshape(m, m))
        d = _frozen(np.asarray(self.d, float).reshape(m))
        if self.c < 0:
            raise InvariantViolation("c must be nonnegative")
        Jm = middle_J(n)
        r = float(np.abs(A @ Jm - Jm @ A).max()) if m else 0.0
        if r > TOL_ALG * max(1.0, float(np.abs(A).max()) if m else 1.0):
            raise InvariantViolation("A must be complex-linear", r)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c", float(self.c))

    @classmethod
    def from_complex(cls, Z, c, d=None):
        Z = np.atleast_2d(np.asarray(Z, complex))
        n = Z.shape[0] + 1
        return cls(n, realify(Z), c, np.zeros(2 * n - 2) if d is None else d)

    @property
    def dim(self):
        return 2 * self.n

    @property
    def trace_A(self):
        """Real trace of the realified block (twice the real part of the complex trace)."""
        return float(np.trace(self.A))

    def ad_last(self):
        """``ad e_2n`` on ``n = span(e_1, ..., e_{2n-1})``."""
        m = 2 * self.n - 1
        M = np.zeros((m, m))
        M[0, 0] = self.c
        M[1:, 0] = self.d
        M[1:, 1:] = self.A
        return M

    def without_d(self):
        return AlmostAbelianSpec(self.n, self.A, self.c, np.zeros_like(self.d))


def bracket_of(spec):
    N = 2 * spec.n
    c = np.zeros((N, N, N))
    ad = spec.ad_last()
    # [e_2n, e_j] = sum_k ad[k, j] e_k
    c[N - 1, : N - 1, : N - 1] = ad.T
    c[: N - 1, N - 1, : N - 1] = -ad.T
    return LieBracket(c)


def assemble(spec):
    return HermitianStructure(bracket_of(spec), ComplexStructure(normal_form_J(spec.n)), np.eye(spec.dim))


def mu_abcde(a, b, c, d, e):
    """The four-dimensional ``mu_{a,b,c,d,e}`` with ``ad e_4 = [[c,0,0],[d,a,-b],[e,b,a]]``."""
    return AlmostAbelianSpec(2, [[a, -b], [b, a]], c, [d, e])


def is_r41_type(a, b, c, d, e, tol=TOL_ALG):
    """``mu_{a,b,c,d,e}`` is isomorphic to r_{4,1} exactly when a = c != 0, b = 0, (d, e) != 0."""
    return abs(a - c) <= tol and abs(c) > tol and abs(b) <= tol and (abs(d) > tol or abs(e) > tol)


def chern_data_closed_form(spec):
    """``p = -1/2 c (2c + tr A) e^1 ^ e^2n`` and ``P = -1/2 c (2c + tr A) (E_11 + E_2n,2n)``."""
    N = spec.dim
    k = -0.5 * spec.c * (2.0 * spec.c + spec.trace_A)
    p = np.zeros((N, N))
    p[0, N - 1] = k
    p[N - 1, 0] = -k
    P = np.zeros((N, N))
    P[0, 0] = P[N - 1, N - 1] = k
    return p, P


def e_value(spec):
    return -spec.c * (2.0 * spec.c + spec.trace_A)


def existence_interval(spec):
    e = e_value(spec)
    if e < 0:
        return 1.0 / e, np.inf
    if e > 0:
        return -np.inf, 1.0 / e
    return -np.inf, np.inf


def is_h3_plus_abelian(b, tol=None):
    """Isomorphic to ``h_3 + R^(dim-3)``: 2-step nilpotent, 1-dim derived algebra, center of codim 2."""
    if not is_two_step_nilpotent(b, tol):
        return False
    return derived_algebra(b).rank == 1 and center(b).rank == b.dim - 2


@dataclass(frozen=True)
class BehaviorReport:
    p_coefficient: float
    e: float
    is_soliton: bool
    soliton_kind: str
    interval: tuple
    nu_direction: str
    nu_bracket: LieBracket
    nu_scale: float
    finite_time_limit: str
    kahler: bool


def predict_behavior(spec, tol=TOL_ALG):
    """Predictions for the flow of ``mu_{A,c,d}`` read off from (A, c, d) alone.

    ``nu_bracket`` is ``nu_scale * mu_{A,c,0}``, the limit of the rescaled
    bracket flow at the infinite endpoint (when p != 0).
    """
    k = -0.5 * spec.c * (2.0 * spec.c + spec.trace_A)
    e = 2.0 * k
    scale = max(1.0, spec.c, float(np.abs(spec.A).max()) if spec.A.size else 0.0)
    p_zero = abs(k) <= tol * scale * scale
    d_zero = not spec.d.size or float(np.abs(spec.d).max()) <= tol * scale
    soliton = p_zero or d_zero
    kind = None
    if soliton:
        kind = "steady" if p_zero else ("expanding" if k < 0 else "shrinking")
    nu_dir = nu = nu_scale = None
    finite = None
    if not p_zero:
        nu_dir = "plus" if e < 0 else "minus"
        nu_scale = float(np.sqrt(2.0 / abs(e)))
        nu = bracket_of(spec.without_d()).scaled(nu_scale)
        if not soliton:
            finite = f"h3+R^{spec.dim - 3}"
    A = spec.A
    kahler = d_zero and (not A.size or float(np.abs(A + A.T).max()) <= tol * scale)
    return BehaviorReport(
        p_coefficient=0.0 if p_zero else k,
        e=0.0 if p_zero else e,
        is_soliton=soliton,
        soliton_kind=kind,
        interval=existence_interval(spec) if not p_zero else (-np.inf, np.inf),
        nu_direction=nu_dir,
        nu_bracket=nu,
        nu_scale=nu_scale,
        finite_time_limit=finite,
        kahler=kahler,
    )


def random_spec(rng, n, c_max=2.0, d_scale=1.0, with_d=True):
    k = n - 1
    Z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    d = rng.normal(scale=d_scale, size=2 * k) if with_d else np.zeros(2 * k)
    return AlmostAbelianSpec(n, realify(Z), float(rng.uniform(0.0, c_max)), d)
