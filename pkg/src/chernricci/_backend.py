"""Backend selection for the numeric kernels.

Set ``CHERNRICCI_DISABLE_NUMBA=1`` before importing the package to force
the pure-numpy kernels; otherwise numba is used when it imports cleanly.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}


def _numba_requested():
    return os.environ.get("CHERNRICCI_DISABLE_NUMBA", "").strip().lower() in _FALSY


def _numba_available():
    try:
        import numba  # noqa: F401
    except Exception:
        return False
    return True


USE_NUMBA = _numba_requested() and _numba_available()
BACKEND = "numba" if USE_NUMBA else "numpy"
