"""Left-invariant complex structures and hermitian metrics on a Lie algebra.

The fundamental 2-form is ``omega(X, Y) = g(JX, Y)``, i.e. the matrix
``Omega = J^T g``.  With ``J^T g J = g`` this agrees with the convention
``g(X, Y) = omega(X, JY)``.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvariantViolation
from .lie import Check, LieBracket, _frozen, validate_bracket
from .tolerances import TOL_ALG


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    J: np.ndarray

    def __post_init__(self):
        J = _frozen(self.J)
        if J.ndim != 2 or J.shape[0] != J.shape[1]:
            raise InvariantViolation("J must be a square matrix")
        if J.shape[0] % 2:
            raise InvariantViolation("complex structure needs even dimension")
        r = float(np.abs(J @ J + np.eye(J.shape[0])).max()) if J.size else 0.0
        if r > TOL_ALG * max(1.0, float(np.abs(J).max())) ** 2:
            raise InvariantViolation("J^2 = -I", r)
        object.__setattr__(self, "J", J)

    @classmethod
    def from_images(cls, dim, images):
        """Build J from 1-based images ``{a: {b: coeff}}`` of half a basis.

        ``J e_a = sum_b coeff e_b`` is given for n of the 2n basis vectors;
        the rest follows from ``J^2 = -I``.
        """
        if 2 * len(images) != dim:
            raise InvariantViolation(f"need images of exactly {dim // 2} basis vectors")
        E = np.eye(dim)
        src, img_vecs = [], []
        for a, img in images.items():
            v = np.zeros(dim)
            for b, coeff in img.items():
                v[b - 1] += coeff
            src.append(E[:, a - 1])
            img_vecs.append(v)
        # J e_a = v_a and J v_a = -e_a fix J on the basis {e_a} u {v_a}
        X = np.column_stack(src + img_vecs)
        Y = np.column_stack(img_vecs + [-e for e in src])
        if abs(np.linalg.det(X)) < 1e-12:
            raise InvariantViolation("the given images do not determine J")
        return cls(Y @ np.linalg.inv(X))

    @property
    def dim(self):
        return self.J.shape[0]

    def __neg__(self):
        return ComplexStructure(-self.J)


def _as_J(J):
    return J if isinstance(J, ComplexStructure) else ComplexStructure(J)


def integrability_residual(b, J):
    return kernels.integrability_residual(b.c, _as_J(J).J)


def check_integrability(b, J, tol=None):
    J = _as_J(J)
    r = integrability_residual(b, J)
    if tol is None:
        tol = TOL_ALG * max(1.0, b.scale()) * max(1.0, float(np.abs(J.J).max())) ** 2
    return Check(r <= tol, r)


def compatible_metric(J, h=None):
    """Average ``h`` (default identity) over J: ``(h + J^T h J) / 2``."""
    J = _as_J(J).J
    h = np.eye(J.shape[0]) if h is None else np.asarray(h, float)
    g = 0.5 * (h + J.T @ h @ J)
    return 0.5 * (g + g.T)


def random_compatible_metric(J, rng, spread=1.0):
    """A random J-compatible inner product, well conditioned for moderate spread."""
    n = _as_J(J).dim
    A = rng.normal(scale=spread, size=(n, n))
    return compatible_metric(J, np.eye(n) + A @ A.T / n)


@dataclass(frozen=True, eq=False)
class HermitianStructure:
    """Bracket, integrable J and compatible metric g, validated on construction."""

    bracket: LieBracket
    J: ComplexStructure
    g: np.ndarray

    def __post_init__(self):
        b = self.bracket
        if not isinstance(b, LieBracket):
            b = LieBracket(b)
            object.__setattr__(self, "bracket", b)
        J = _as_J(self.J)
        object.__setattr__(self, "J", J)
        g = _frozen(self.g)
        object.__setattr__(self, "g", g)
        n = b.dim
        if J.dim != n or g.shape != (n, n):
            raise InvariantViolation("bracket, J and metric dimensions disagree")
        report = validate_bracket(b)
        if report:
            raise InvariantViolation(report[0].name, report[0].magnitude)
        gscale = max(1.0, float(np.abs(g).max()))
        sym = float(np.abs(g - g.T).max())
        if sym > TOL_ALG * gscale:
            raise InvariantViolation("metric symmetry", sym)
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise InvariantViolation("metric positive-definite") from None
        comp = float(np.abs(J.J.T @ g @ J.J - g).max())
        if comp > TOL_ALG * gscale * max(1.0, float(np.abs(J.J).max())) ** 2:
            raise InvariantViolation("compatibility J^T g J = g", comp)
        integ = check_integrability(b, J)
        if not integ:
            raise InvariantViolation("integrability of J", integ.residual)

    @classmethod
    def from_omega(cls, bracket, J, omega):
        """Metric ``g(X, Y) = omega(X, JY)`` from a J-invariant 2-form."""
        J = _as_J(J)
        g = np.asarray(omega, float) @ J.J
        return cls(bracket, J, 0.5 * (g + g.T))

    @property
    def dim(self):
        return self.bracket.dim

    @property
    def omega(self):
        return omega(self)

    def with_metric(self, g):
        return HermitianStructure(self.bracket, self.J, g)

    def with_bracket(self, bracket):
        return HermitianStructure(bracket, self.J, self.g)

    def in_basis(self, E):
        """The same structure written in the basis given by the columns of E."""
        from .lie import act_gl

        E = np.asarray(E, float)
        Einv = np.linalg.inv(E)
        return HermitianStructure(act_gl(self.bracket, Einv), Einv @ self.J.J @ E, E.T @ self.g @ E)


def omega(h):
    """Matrix of ``omega(e_i, e_j) = g(J e_i, e_j)``."""
    return h.J.J.T @ h.g


def d_one_form(b, alpha):
    """``d alpha(X, Y) = -alpha([X, Y])`` as an antisymmetric matrix."""
    return -(b.c @ np.asarray(alpha, float))


def d_two_form(b, alpha):
    """Chevalley-Eilenberg differential of a left-invariant 2-form.

    ``d a(X, Y, Z) = -a([X,Y], Z) + a([X,Z], Y) - a([Y,Z], X)``.
    """
    A = np.einsum("ijm,mk->ijk", b.c, np.asarray(alpha, float))
    return -A + A.transpose(0, 2, 1) - A.transpose(2, 0, 1)


def d_omega(h):
    return d_two_form(h.bracket, omega(h))


def is_kahler(h, tol=None):
    dw = d_omega(h)
    r = float(np.abs(dw).max()) if dw.size else 0.0
    if tol is None:
        tol = TOL_ALG * max(1.0, h.bracket.scale()) * max(1.0, float(np.abs(h.g).max()))
    return Check(r <= tol, r)


def bi_invariance_residual(b, J):
    """Size of ``[JX, Y] - J[X, Y]``; zero iff J is bi-invariant."""
    J = _as_J(J).J
    r = np.einsum("ai,ajk->ijk", J, b.c) - np.einsum("km,ijm->ijk", J, b.c)
    return float(np.abs(r).max()) if r.size else 0.0


def abelian_residual(b, J):
    """Size of ``[JX, JY] - [X, Y]``; zero iff J is abelian."""
    J = _as_J(J).J
    r = np.einsum("ai,bj,abk->ijk", J, J, b.c) - b.c
    return float(np.abs(r).max()) if r.size else 0.0
