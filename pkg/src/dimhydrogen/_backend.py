"""Selection of the kernel backend.

Hot loops (Sturm counts, bisection, tridiagonal solves, Numerov sweeps) are
compiled with numba when it is importable.  Setting ``DIMHYDROGEN_BACKEND=numpy``
forces the pure-numpy fallback, which produces bit-identical results but runs
the sequential recurrences in the interpreter.
"""

import os

ENV_VAR = "DIMHYDROGEN_BACKEND"

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAS_NUMBA = False


def requested_backend():
    value = os.environ.get(ENV_VAR, "").strip().lower()
    if value in ("", "auto"):
        return "numba" if HAS_NUMBA else "numpy"
    if value not in ("numba", "numpy"):
        raise ValueError(f"{ENV_VAR} must be 'numba', 'numpy' or 'auto', got {value!r}")
    if value == "numba" and not HAS_NUMBA:
        raise ImportError(f"{ENV_VAR}=numba but numba is not installed")
    return value


def njit(func):
    """Compile ``func`` in nopython mode; identity when numba is missing."""
    if not HAS_NUMBA:
        return func
    # fastmath stays off: the numpy path must reproduce the same roundings
    return numba.njit(cache=True, nogil=True)(func)
