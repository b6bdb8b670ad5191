"""Numerical thresholds used across the package.

Algebraic residuals are compared against ``TOL_ALG`` after scaling by the
size of the data involved, so that the tests stay meaningful for brackets
and metrics far from unit scale.
"""

TOL_ALG = 1e-9
TOL_RANK = 1e-8  # relative singular-value cutoff
RANK_FLOOR = 1e-12  # absolute singular-value floor
TOL_EIG = 1e-8  # eigenvalue clustering
EIGEN_TOL = 1e-12  # Jacobi off-diagonal stopping criterion (relative)
