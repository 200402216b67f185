"""Inner loops of the eigensolver and the shooting integrator.

Every kernel exists twice: a scalar loop compiled by numba, and a numpy
fallback that performs the same floating-point operations in the same order.
The two backends therefore agree bit for bit; the fallback vectorises the
Sturm count across shifts instead of across rows, since the row recurrence is
inherently sequential.

The active backend is chosen once, at import, from ``DIMHYDROGEN_BACKEND``.
``get_backend(name)`` returns either implementation explicitly, which the
benchmarks and the backend-equivalence tests use.
"""

import contextlib
from types import SimpleNamespace

import numpy as np

from . import _backend

# Numerov sweeps rescale the partial solution once it exceeds this magnitude.
RESCALE_LIMIT = 1e150


# ---------------------------------------------------------------- loop kernels
# These are written for numba's nopython mode; the numpy backend never calls
# them uncompiled on large inputs.


def _sturm_count_loop(diag, off_sq, lam, pivmin):
    n = diag.shape[0]
    count = 0
    q = diag[0] - lam
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = (diag[i] - lam) - off_sq[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def _make_bisect(count_fn):
    def bisect_lowest(diag, off_sq, count, lo, hi, rtol, atol, pivmin):
        out = np.empty(count)
        for k in range(count):
            a = lo
            b = hi
            while True:
                mid = 0.5 * (a + b)
                if b - a <= max(rtol * abs(mid), atol) or mid <= a or mid >= b:
                    break
                if count_fn(diag, off_sq, mid, pivmin) > k:
                    b = mid
                else:
                    a = mid
            out[k] = 0.5 * (a + b)
        return out

    return bisect_lowest


def _tridiag_solve_loop(diag, off, rhs, pivmin):
    n = diag.shape[0]
    w = np.empty(n)
    y = np.empty(n)
    x = np.empty(n)
    w[0] = diag[0]
    y[0] = rhs[0]
    if abs(w[0]) < pivmin:
        w[0] = -pivmin
    for i in range(1, n):
        m = off[i - 1] / w[i - 1]
        w[i] = diag[i] - m * off[i - 1]
        if abs(w[i]) < pivmin:
            w[i] = -pivmin
        y[i] = rhs[i] - m * y[i - 1]
    x[n - 1] = y[n - 1] / w[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = (y[i] - off[i] * x[i + 1]) / w[i]
    return x


def _numerov_forward_loop(a, y0, y1):
    # Summed form of Numerov for y'' = g y with a = h² g: w = (1 - a/12) y obeys
    # w[i+1] - w[i] = (w[i] - w[i-1]) + a[i] y[i]; carrying the difference keeps
    # round-off at O(N eps) where the three-term form drifts as O(N² eps).
    n = a.shape[0]
    y = np.empty(n)
    y[0] = y0
    y[1] = y1
    w = (1.0 - a[1] / 12.0) * y1
    d = w - (1.0 - a[0] / 12.0) * y0
    for i in range(1, n - 1):
        d += a[i] * y[i]
        w += d
        y[i + 1] = w / (1.0 - a[i + 1] / 12.0)
        if abs(y[i + 1]) > RESCALE_LIMIT:
            for j in range(i + 2):
                y[j] = y[j] / RESCALE_LIMIT
            w = w / RESCALE_LIMIT
            d = d / RESCALE_LIMIT
    return y


# -------------------------------------------------------------- numpy fallback


def _sturm_counts_numpy(diag, off_sq, lams, pivmin):
    """Negative-pivot counts for every shift in ``lams`` at once."""
    lams = np.asarray(lams, dtype=float)
    q = diag[0] - lams
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0.0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        q = (diag[i] - lams) - off_sq[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0.0
    return count


def _sturm_count_numpy(diag, off_sq, lam, pivmin):
    return int(_sturm_counts_numpy(diag, off_sq, np.array([lam]), pivmin)[0])


def _bisect_lowest_numpy(diag, off_sq, count, lo, hi, rtol, atol, pivmin):
    a = np.full(count, float(lo))
    b = np.full(count, float(hi))
    k = np.arange(count)
    active = np.ones(count, dtype=bool)
    while True:
        mid = 0.5 * (a + b)
        done = (b - a <= np.maximum(rtol * np.abs(mid), atol)) | (mid <= a) | (mid >= b)
        active &= ~done
        if not active.any():
            break
        idx = np.flatnonzero(active)
        above = _sturm_counts_numpy(diag, off_sq, mid[idx], pivmin) > k[idx]
        b[idx[above]] = mid[idx[above]]
        a[idx[~above]] = mid[idx[~above]]
    return 0.5 * (a + b)


def _tridiag_solve_numpy(diag, off, rhs, pivmin):
    # plain float arithmetic matches the compiled loop operation for operation
    d = diag.tolist()
    e = off.tolist()
    r = rhs.tolist()
    n = len(d)
    w = [0.0] * n
    y = [0.0] * n
    w[0] = d[0]
    y[0] = r[0]
    if abs(w[0]) < pivmin:
        w[0] = -pivmin
    for i in range(1, n):
        m = e[i - 1] / w[i - 1]
        w[i] = d[i] - m * e[i - 1]
        if abs(w[i]) < pivmin:
            w[i] = -pivmin
        y[i] = r[i] - m * y[i - 1]
    x = [0.0] * n
    x[n - 1] = y[n - 1] / w[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = (y[i] - e[i] * x[i + 1]) / w[i]
    return np.array(x)


def _numerov_forward_numpy(a, y0, y1):
    aa = a.tolist()
    n = len(aa)
    y = np.empty(n)
    y[0] = y0
    y[1] = y1
    cur = float(y1)
    w = (1.0 - aa[1] / 12.0) * cur
    d = w - (1.0 - aa[0] / 12.0) * float(y0)
    for i in range(1, n - 1):
        d += aa[i] * cur
        w += d
        cur = w / (1.0 - aa[i + 1] / 12.0)
        y[i + 1] = cur
        if abs(cur) > RESCALE_LIMIT:
            y[:i + 2] /= RESCALE_LIMIT
            w = w / RESCALE_LIMIT
            d = d / RESCALE_LIMIT
            cur = y[i + 1]
    return y


# ------------------------------------------------------------------- registry


def _build_numba():
    count = _backend.njit(_sturm_count_loop)
    return SimpleNamespace(
        name="numba",
        sturm_count=count,
        bisect_lowest=_backend.njit(_make_bisect(count)),
        tridiag_solve=_backend.njit(_tridiag_solve_loop),
        numerov_forward=_backend.njit(_numerov_forward_loop),
    )


def _build_numpy():
    return SimpleNamespace(
        name="numpy",
        sturm_count=_sturm_count_numpy,
        bisect_lowest=_bisect_lowest_numpy,
        tridiag_solve=_tridiag_solve_numpy,
        numerov_forward=_numerov_forward_numpy,
    )


_CACHE = {}


def get_backend(name=None):
    """Return the kernel namespace for ``name`` (default: the active backend)."""
    if name is None:
        name = _backend.requested_backend()
    if name not in _CACHE:
        if name == "numba":
            if not _backend.HAS_NUMBA:
                raise ImportError("numba backend requested but numba is not installed")
            _CACHE[name] = _build_numba()
        elif name == "numpy":
            _CACHE[name] = _build_numpy()
        else:
            raise ValueError(f"unknown backend {name!r}")
    return _CACHE[name]


ACTIVE = get_backend()
BACKEND = ACTIVE.name


@contextlib.contextmanager
def using(name):
    """Temporarily route the module-level kernels to backend ``name``.

    Meant for benchmarks and tests; it swaps process-wide state, so do not
    use it while other threads are solving.
    """
    global ACTIVE
    previous = ACTIVE
    ACTIVE = get_backend(name)
    try:
        yield ACTIVE
    finally:
        ACTIVE = previous


def sturm_count(diag, off_sq, lam, pivmin):
    return int(ACTIVE.sturm_count(diag, off_sq, float(lam), float(pivmin)))


def bisect_lowest(diag, off_sq, count, lo, hi, rtol, atol, pivmin):
    """Lowest ``count`` eigenvalues; each bracket stops at max(rtol·|λ|, atol)."""
    return ACTIVE.bisect_lowest(diag, off_sq, int(count), float(lo), float(hi),
                                float(rtol), float(atol), float(pivmin))


def tridiag_solve(diag, off, rhs, pivmin):
    return ACTIVE.tridiag_solve(diag, off, rhs, float(pivmin))


def numerov_forward(a, y0, y1):
    """Numerov solution of y'' = g y on a uniform mesh, given a = h² g."""
    return ACTIVE.numerov_forward(a, float(y0), float(y1))
