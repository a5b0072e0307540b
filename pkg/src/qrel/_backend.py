"""Kernel backend selection.

The hot kernels (Jacobi eigensolver, Gram-Schmidt) exist in two variants: a
loop-based one compiled with numba and a vectorized pure-numpy fallback.
``QREL_BACKEND=numpy`` forces the fallback; ``QREL_BACKEND=numba`` requires
numba and fails loudly if it is missing.  Unset, numba is used when available.
"""

import os
import warnings

_requested = os.environ.get("QREL_BACKEND", "auto").strip().lower()

if _requested not in ("auto", "numba", "numpy", ""):
    warnings.warn(f"unknown QREL_BACKEND={_requested!r}, falling back to auto")
    _requested = "auto"

if _requested == "numpy":
    NUMBA_ENABLED = False
else:
    try:
        import numba  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:
        if _requested == "numba":
            raise ImportError("QREL_BACKEND=numba but numba is not installed")
        NUMBA_ENABLED = False


def compile_kernel(func):
    """Return the numba-compiled version of `func`, or `func` itself on the numpy path."""
    if NUMBA_ENABLED:
        from numba import njit

        return njit(cache=True)(func)
    return func


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
