"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_backends.py [--repeat N] [--full]

The default sizes finish in well under a minute.  ``--full`` adds an 80k-cell
operator and a complete solve, where the numpy side takes several minutes.

Both backends run the same discretised operators; the first compiled call is
made before timing so JIT compilation is not counted.
"""

import argparse
import time

import numpy as np

from dimhydrogen import GridSpec, PotentialModel, RadialProblem, discretize, kernels, solve_states
from dimhydrogen._backend import HAS_NUMBA
from dimhydrogen.eigensolver import _pivmin


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def workloads(full):
    hydrogen = RadialProblem(3, 0, PotentialModel("newtonian", 3, 1.0))
    log2d = RadialProblem(2, 0, PotentialModel("consistent", 2, 1.0))
    for n in ((5_000, 20_000, 80_000) if full else (5_000, 20_000)):
        op = discretize(hydrogen, GridSpec(0.0, 60.0, n))
        off_sq = op.off_diagonal**2
        lo, hi = op.gershgorin()
        piv = _pivmin(op)
        yield (f"bisection, 3 levels, n={n}",
               lambda: kernels.bisect_lowest(op.diagonal, off_sq, 3, lo, hi, 1e-12, 1e-12, piv))
        rhs = np.ones(n)
        yield (f"tridiagonal solve, n={n}",
               lambda: kernels.tridiag_solve(op.diagonal + 0.5, op.off_diagonal, rhs, piv))
    a = np.full(200_000, 1e-6)
    yield "numerov sweep, 200k steps", lambda: kernels.numerov_forward(a, 0.0, 1.0)
    if full:
        yield "solve_states, D=2 log, 3 states", lambda: solve_states(log2d, n_states=3)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--full", action="store_true", help="include the large workloads")
    args = parser.parse_args()
    if not HAS_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare against")
    print(f"{'workload':<36}{'numba [s]':>12}{'numpy [s]':>12}{'speed-up':>10}")
    for label, fn in workloads(args.full):
        timings = {}
        for name in ("numba", "numpy"):
            with kernels.using(name):
                fn()  # warm-up (JIT compilation for numba)
                timings[name] = best_of(fn, args.repeat)
        ratio = timings["numpy"] / timings["numba"]
        print(f"{label:<36}{timings['numba']:>12.4f}{timings['numpy']:>12.4f}{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
