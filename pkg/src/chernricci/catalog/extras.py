"""Row-specific checks referenced by name from the catalog JSON."""
import numpy as np

from ..almost_abelian import assemble, is_r41_type, mu_abcde, predict_behavior
from ..flow import limit_nu, solve
from ..lie import LieBracket
from ..soliton import certify


def same_up_to_scaling(b1, b2, tol=1e-6):
    """Compare unit-norm coefficient tensors in a common basis."""
    c1 = b1.c if isinstance(b1, LieBracket) else np.asarray(b1)
    c2 = b2.c if isinstance(b2, LieBracket) else np.asarray(b2)
    n1, n2 = np.linalg.norm(c1), np.linalg.norm(c2)
    if n1 == 0 or n2 == 0:
        return n1 == n2
    return float(np.abs(c1 / n1 - c2 / n2).max()) <= tol


def is_hyperbolic_type(b, tol=1e-9):
    """``[x, y] = l(x) y - l(y) x`` for a nonzero linear form l (the algebra of real hyperbolic space)."""
    c = b.c
    n = b.dim
    ell = np.array([sum(c[i, j, j] for j in range(n) if j != i) for i in range(n)]) / (n - 1)
    if np.linalg.norm(ell) <= tol:
        return False
    model = np.einsum("i,jk->ijk", ell, np.eye(n)) - np.einsum("j,ik->ijk", ell, np.eye(n))
    return float(np.abs(c - model).max()) <= tol * max(1.0, float(np.abs(c).max()))


def r41_nonexistence(inst):
    problems = []
    # normal form mu_{a,0,a,d,e}: r_{4,1} exactly when (d, e) != 0, never a soliton then
    for a in (0.5, 1.0, 2.0):
        for d, e in ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (-2.0, 0.5)):
            if not is_r41_type(a, 0.0, a, d, e):
                problems.append(f"predicate rejects a={a}, d={d}, e={e}")
            spec = mu_abcde(a, 0.0, a, d, e)
            if certify(assemble(spec)).is_soliton or predict_behavior(spec).is_soliton:
                problems.append(f"soliton found at a={a}, d={d}, e={e}")
    # diagonal compatible metrics on the catalog bracket
    h = inst.structure
    for x in (0.5, 1.0, 2.0, 5.0):
        for y in (0.5, 1.0, 2.0, 5.0):
            if certify(h.with_metric(np.diag([x, x, y, y]))).is_soliton:
                problems.append(f"diagonal metric ({x},{x},{y},{y}) is a soliton")
    # the normalized limit lands on r_{4,1,1}
    lim = limit_nu(solve(h), "plus")
    if not lim.converged or not is_hyperbolic_type(lim.bracket_original()):
        problems.append("nu_+ is not of hyperbolic type")
    lim = limit_nu(solve(assemble(mu_abcde(1, 0, 1, 1, 0))), "plus")
    if not (lim.converged and same_up_to_scaling(lim.bracket_original(), assemble(mu_abcde(1, 0, 1, 0, 0)).bracket, 1e-8)):
        problems.append("nu_+ of mu_{1,0,1,1,0} differs from mu_{1,0,1,0,0}")
    return not problems, "; ".join(problems) or "no soliton in sampled normal forms or diagonal metrics; nu_+ hyperbolic"
