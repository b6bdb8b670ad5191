"""Real Lie algebras given by structure constants.

Indices are 1-based wherever a user names a basis vector
(:meth:`LieBracket.from_relations`, :meth:`LieBracket.relations`); arrays
are ordinary 0-based numpy arrays.
"""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InvariantViolation, NonInvertibleError
from .tolerances import RANK_FLOOR, TOL_ALG, TOL_RANK


def _frozen(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Check:
    """Outcome of a residual test; truthy iff it passed."""

    ok: bool
    residual: float

    def __bool__(self):
        return bool(self.ok)


@dataclass(frozen=True)
class Violation:
    name: str
    magnitude: float


@dataclass(frozen=True, eq=False)
class LieBracket:
    """Structure constants ``c[i, j, k]`` with ``[e_i, e_j] = sum_k c[i, j, k] e_k``."""

    c: np.ndarray

    def __post_init__(self):
        c = _frozen(self.c)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise InvariantViolation("structure tensor must have shape (dim, dim, dim)")
        object.__setattr__(self, "c", c)

    @classmethod
    def from_relations(cls, dim, relations):
        """Build from 1-based relations.

        ``relations`` is either a mapping ``{(i, j): {k: coeff}}`` or an
        iterable of ``(i, j, k, coeff)``.  Only one of ``[e_i, e_j]`` and
        ``[e_j, e_i]`` needs to be given; the other is filled in.
        """
        c = np.zeros((dim, dim, dim))
        if hasattr(relations, "items"):
            items = [(i, j, k, v) for (i, j), img in relations.items() for k, v in img.items()]
        else:
            items = list(relations)
        for i, j, k, v in items:
            for idx in (i, j, k):
                if not 1 <= idx <= dim:
                    raise InvariantViolation(f"basis index {idx} out of range 1..{dim}")
            if i == j:
                if v != 0:
                    raise InvariantViolation(f"[e{i},e{i}] must vanish")
                continue
            c[i - 1, j - 1, k - 1] += v
            c[j - 1, i - 1, k - 1] -= v
        return cls(c)

    @classmethod
    def abelian(cls, dim):
        return cls(np.zeros((dim, dim, dim)))

    @property
    def dim(self):
        return self.c.shape[0]

    def __call__(self, x, y):
        return np.einsum("a,b,abk->k", np.asarray(x, float), np.asarray(y, float), self.c)

    def relations(self, tol=0.0):
        """Nonzero constants as 1-based ``(i, j, k, coeff)`` with ``i < j``."""
        out = []
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    v = self.c[i, j, k]
                    if abs(v) > tol:
                        out.append((i + 1, j + 1, k + 1, float(v)))
        return out

    def scale(self):
        return float(np.abs(self.c).max()) if self.c.size else 0.0

    def is_abelian(self, tol=TOL_ALG):
        return self.scale() <= tol

    def scaled(self, s):
        return LieBracket(s * self.c)

    def allclose(self, other, atol=TOL_ALG):
        return self.dim == other.dim and bool(np.allclose(self.c, other.c, rtol=0.0, atol=atol))

    def __repr__(self):
        rels = ", ".join(f"[e{i},e{j}]_{k}={v:.6g}" for i, j, k, v in self.relations(1e-14))
        return f"LieBracket(dim={self.dim}; {rels or 'abelian'})"


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace given by an orthonormal column basis."""

    basis: np.ndarray
    ambient: int = field(default=None)

    def __post_init__(self):
        B = np.array(self.basis, dtype=float, copy=True)
        if B.ndim == 1:
            B = B.reshape(-1, 1)
        amb = self.ambient if self.ambient is not None else B.shape[0]
        if B.shape[0] != amb:
            raise InvariantViolation("basis vectors have the wrong length")
        if B.shape[1] and np.linalg.matrix_rank(B, tol=1e-10) < B.shape[1]:
            raise InvariantViolation("subspace basis is not linearly independent")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)
        object.__setattr__(self, "ambient", amb)

    @classmethod
    def span(cls, vectors, ambient=None, orthonormal=True):
        """Span of column vectors (or a list of vectors), rank-thresholded."""
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            M = vectors.astype(float)
        else:
            vectors = [np.asarray(v, float) for v in vectors]
            if not vectors:
                if ambient is None:
                    raise ValueError("ambient dimension needed for an empty span")
                return cls(np.zeros((ambient, 0)), ambient)
            M = np.column_stack(vectors)
        ambient = M.shape[0] if ambient is None else ambient
        if M.shape[1] == 0:
            return cls(np.zeros((ambient, 0)), ambient)
        U, s, _ = np.linalg.svd(M, full_matrices=False)
        r = _rank_from_singular_values(s)
        if not orthonormal:
            return cls(M, ambient)
        return cls(_gram_schmidt(M, U[:, :r]), ambient)

    @classmethod
    def coordinate(cls, dim, indices):
        """Span of the 1-based coordinate vectors ``e_i``."""
        E = np.eye(dim)
        return cls(E[:, [i - 1 for i in indices]], dim)

    @classmethod
    def zero(cls, dim):
        return cls(np.zeros((dim, 0)), dim)

    @classmethod
    def full(cls, dim):
        return cls(np.eye(dim), dim)

    @property
    def rank(self):
        return self.basis.shape[1]

    def projector(self):
        Q, _ = np.linalg.qr(self.basis) if self.rank else (self.basis, None)
        return Q @ Q.T

    def distance(self, v):
        v = np.asarray(v, float)
        return float(np.linalg.norm(v - self.projector() @ v))

    def contains(self, v, tol=TOL_ALG):
        v = np.asarray(v, float)
        return self.distance(v) <= tol * max(1.0, float(np.linalg.norm(v)))

    def complement(self):
        """Orthogonal complement for the standard inner product."""
        Pc = np.eye(self.ambient) - self.projector()
        return Subspace.span(Pc, self.ambient)

    def same_as(self, other, tol=1e-8):
        return self.rank == other.rank and np.allclose(self.projector(), other.projector(), atol=tol)

    def __repr__(self):
        return f"Subspace(rank={self.rank}, ambient={self.ambient})"


def _rank_from_singular_values(s):
    if s.size == 0:
        return 0
    thr = max(TOL_RANK * s[0], RANK_FLOOR)
    return int((s > thr).sum())


def _gram_schmidt(M, U):
    """Orthonormal basis of span(U) built by Gram-Schmidt on the columns of M.

    Working from M keeps the basis aligned with the input vectors, which
    makes returned bases deterministic and readable (coordinate spans come
    back as coordinate vectors).
    """
    r = U.shape[1]
    out = []
    for v in M.T:
        w = v.astype(float).copy()
        for q in out:
            w -= (q @ w) * q
        for q in out:  # second pass for stability
            w -= (q @ w) * q
        nrm = np.linalg.norm(w)
        if nrm > max(TOL_RANK * np.linalg.norm(v), RANK_FLOOR):
            out.append(w / nrm)
        if len(out) == r:
            break
    if len(out) < r:  # numerically awkward input: fall back to the SVD basis
        return U
    return np.column_stack(out) if out else np.zeros((M.shape[0], 0))


def nullspace(M):
    """Orthonormal basis (columns) of the kernel of M."""
    M = np.atleast_2d(np.asarray(M, float))
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n)
    _, s, Vt = np.linalg.svd(M, full_matrices=True)
    r = _rank_from_singular_values(s)
    return Vt[r:].T.copy()


def _tol(b, power=1):
    return TOL_ALG * max(1.0, b.scale()) ** power


def validate_bracket(b, tol=TOL_ALG):
    """List of violated identities (empty when ``b`` is a Lie bracket)."""
    report = []
    scale = max(1.0, b.scale())
    anti = kernels.antisymmetry_residual(b.c)
    if anti > tol * scale:
        report.append(Violation("antisymmetry", anti))
    jac = kernels.jacobi_residual(b.c)
    if jac > tol * scale**2:
        report.append(Violation("jacobi", jac))
    return report


def require_valid(b):
    report = validate_bracket(b)
    if report:
        v = report[0]
        raise InvariantViolation(v.name, v.magnitude)
    return b


def ad(b, x):
    """Matrix of ``y -> [x, y]``."""
    x = np.asarray(x, float)
    return np.einsum("a,alk->kl", x, b.c)


def bracket_matrix(b):
    """The linear map ``x -> ([x, e_1], ..., [x, e_n])`` as an (n*n, n) matrix."""
    n = b.dim
    return b.c.transpose(1, 2, 0).reshape(n * n, n)


def _images(b, left, right):
    return [b(x, y) for x in left for y in right]


def is_subalgebra(b, s, tol=None):
    tol = _tol(b) if tol is None else tol
    U = s.basis.T
    return all(s.distance(v) <= tol for v in _images(b, U, U))


def is_ideal(b, s, tol=None):
    tol = _tol(b) if tol is None else tol
    E = np.eye(b.dim)
    return all(s.distance(v) <= tol for v in _images(b, E, s.basis.T))


def is_abelian_ideal(b, s, tol=None):
    tol = _tol(b) if tol is None else tol
    U = s.basis.T
    if any(np.linalg.norm(v) > tol for v in _images(b, U, U)):
        return False
    return is_ideal(b, s, tol)


def bracket_of(b, s1, s2):
    """The subspace spanned by ``[s1, s2]``."""
    vecs = _images(b, s1.basis.T, s2.basis.T)
    return Subspace.span(vecs, ambient=b.dim)


def derived_algebra(b):
    full = Subspace.full(b.dim)
    return bracket_of(b, full, full)


def lower_central_series(b):
    """Ranks-decreasing list g, [g,g], [g,[g,g]], ... until it stabilizes."""
    full = Subspace.full(b.dim)
    series = [full]
    while True:
        nxt = bracket_of(b, full, series[-1])
        if nxt.rank == series[-1].rank:
            return series
        series.append(nxt)
        if nxt.rank == 0:
            return series


def is_nilpotent(b):
    return lower_central_series(b)[-1].rank == 0


def nilpotency_step(b):
    """Length of the lower central series (1 for abelian), or None if not nilpotent."""
    series = lower_central_series(b)
    if series[-1].rank != 0:
        return None
    return len(series) - 1


def center(b):
    return Subspace.span(nullspace(bracket_matrix(b)), ambient=b.dim)


def derivation_residual(b, D):
    return kernels.derivation_residual(b.c, np.asarray(D, float))


def is_derivation(b, D, tol=None):
    D = np.asarray(D, float)
    if D.shape != (b.dim, b.dim):
        raise InvariantViolation(f"derivation must be a {b.dim}x{b.dim} matrix")
    r = derivation_residual(b, D)
    if tol is None:
        tol = TOL_ALG * max(1.0, b.scale()) * max(1.0, float(np.abs(D).max()))
    return Check(r <= tol, r)


def derivation_space(b):
    """Basis (list of matrices) of Der(g)."""
    n = b.dim
    iu, ju = np.triu_indices(n, 1)
    cols = []
    for a in range(n):
        for c_ in range(n):
            E = np.zeros((n, n))
            E[a, c_] = 1.0
            r = kernels.numpy_kernels.delta(b.c, E)
            cols.append(r[iu, ju, :].ravel())
    L = np.column_stack(cols) if cols else np.zeros((0, 0))
    N = nullspace(L)
    return [N[:, k].reshape(n, n) for k in range(N.shape[1])]


def act_gl(b, h):
    """``h . [., .] = h [h^-1 ., h^-1 .]``."""
    h = np.asarray(h, float)
    if h.shape != (b.dim, b.dim):
        raise InvariantViolation("basis change has the wrong shape")
    cond = np.linalg.cond(h)
    if not np.isfinite(cond) or cond > 1e12:
        raise NonInvertibleError("non-invertible basis change")
    hinv = np.linalg.inv(h)
    return LieBracket(kernels.act_gl(b.c, h, hinv))


def is_two_step_nilpotent(b, tol=None):
    """Nonabelian with ``[g, [g, g]] = 0``."""
    tol = _tol(b) if tol is None else tol
    if b.is_abelian(tol):
        return False
    series = lower_central_series(b)
    return len(series) == 3 and series[-1].rank == 0
