"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The active implementation is chosen once at import time by
:mod:`chernricci._backend`.  Both implementations stay importable as
``numpy_kernels`` and ``numba_kernels`` (the latter is ``None`` when numba
is unavailable) so tests and benchmarks can compare them directly.
"""
from .. import _backend
from . import _numpy as numpy_kernels

try:
    from . import _numba as numba_kernels
except Exception:  # numba missing or broken
    numba_kernels = None

_active = numba_kernels if (_backend.USE_NUMBA and numba_kernels is not None) else numpy_kernels
BACKEND = "numba" if _active is numba_kernels else "numpy"

OK = numpy_kernels.OK
LEFT_CONE = numpy_kernels.LEFT_CONE

antisymmetry_residual = _active.antisymmetry_residual
jacobi_residual = _active.jacobi_residual
chern_form = _active.chern_form
act_gl = _active.act_gl
integrability_residual = _active.integrability_residual
delta = _active.delta
derivation_residual = _active.derivation_residual
rk4_crf = _active.rk4_crf
rk4_bracket_flow = _active.rk4_bracket_flow
jacobi_eigh = _active.jacobi_eigh

__all__ = [
    "BACKEND",
    "numpy_kernels",
    "numba_kernels",
    "antisymmetry_residual",
    "jacobi_residual",
    "chern_form",
    "act_gl",
    "integrability_residual",
    "delta",
    "derivation_residual",
    "rk4_crf",
    "rk4_bracket_flow",
    "jacobi_eigh",
]
