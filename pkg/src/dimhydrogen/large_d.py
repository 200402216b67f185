"""Classical (large-D) limit of the ground state.

The large-dimension picture replaces the ground state by the bottom of the
effective potential U_eff = K/r² + V.  For -Z/r the minimum is analytic,

    r* = 2K/Z,   U_min = -Z²/(4K),   ω = sqrt(U_eff''(r*)) = Z² / (2√2 K^{3/2}),

and the exact ground state -Z²/(2 n_eff²) gives E/U_min = (D-3)/(D-1) at l = 0
(in general (l + (D-3)/2)/(l + (D-1)/2)), which tends to 1 as D grows.
"""

from dataclasses import dataclass
import math
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .eigensolver import CollapseClass, collapse_diagnostic, solve_states
from .potentials import Family, PotentialModel, potential_energy_derivative
from .radial import RadialProblem, StabilityKind, classify_stability, effective_potential

SEARCH_BOUNDS = (1e-6, 1e6)
SEARCH_SAMPLES = 1201


@dataclass(frozen=True)
class ClassicalPoint:
    r_star: float
    u_min: float
    omega: float
    exists: bool

    @classmethod
    def absent(cls):
        return cls(math.nan, math.nan, math.nan, False)


def _u_prime(problem, r):
    return -2.0 * problem.centrifugal / r**3 + potential_energy_derivative(problem.potential, r, 1)


def _u_second(problem, r):
    return 6.0 * problem.centrifugal / r**4 + potential_energy_derivative(problem.potential, r, 2)


def classical_minimum(problem):
    """Minimum of U_eff, or an absent point when U_eff has no interior minimum."""
    k = problem.centrifugal
    model = problem.potential
    if model.family is Family.NEWTONIAN:
        if k <= 0:
            return ClassicalPoint.absent()
        z = model.charge
        return ClassicalPoint(2.0 * k / z, -z * z / (4.0 * k),
                              z * z / (2.0 * math.sqrt(2.0) * k**1.5), True)

    # Sample on a log ladder; a minimum on either end means U_eff is monotone
    # over the bracket or unbounded below at the origin.
    r = np.geomspace(*SEARCH_BOUNDS, SEARCH_SAMPLES)
    u = effective_potential(problem, r)
    best = int(np.argmin(u))
    if best in (0, r.size - 1):
        return ClassicalPoint.absent()
    lo, hi = r[best - 1], r[best + 1]
    # U' changes sign across the sampled minimum; its root is the stationary point
    r_star = brentq(lambda x: _u_prime(problem, x), lo, hi, xtol=1e-300, rtol=1e-15)
    curvature = float(_u_second(problem, r_star))
    if not curvature > 0:
        return ClassicalPoint.absent()
    return ClassicalPoint(r_star, effective_potential(problem, r_star), math.sqrt(curvature), True)


def predicted_ratio(family, dimension, l):
    """E_0 / U_min for -Z/r; NaN where no closed form exists."""
    if Family(family) is not Family.NEWTONIAN:
        return math.nan
    below = l + (dimension - 3) / 2
    if below <= 0:
        return math.nan
    return below / (l + (dimension - 1) / 2)


@dataclass(frozen=True)
class LargeDRow:
    dimension: int
    classification: str
    numeric_ground: float
    classical_minimum: float
    harmonic_estimate: float
    ratio: float
    predicted_ratio: float
    status: str = "ok"


def scan_row(family, convention, charge, l, dimension, *, points=None):
    model = PotentialModel(family, dimension, charge, convention)
    problem = RadialProblem(dimension, l, model)
    point = classical_minimum(problem)
    u_min = point.u_min if point.exists else math.nan
    harmonic = point.u_min + 0.5 * point.omega if point.exists else math.nan
    predicted = predicted_ratio(family, dimension, l)

    stability = classify_stability(problem)
    if stability.kind is StabilityKind.SUPERCRITICAL:
        report = collapse_diagnostic(problem)
        return LargeDRow(dimension, report.classification.value, math.nan, u_min,
                         harmonic, math.nan, predicted, "supercritical")
    kwargs = {} if points is None else {"points": points}
    try:
        spectrum = solve_states(problem, n_states=1, **kwargs)
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        return LargeDRow(dimension, "Failed", math.nan, u_min, harmonic, math.nan,
                         predicted, f"solver failure: {exc}")
    if not spectrum.found:
        return LargeDRow(dimension, CollapseClass.NO_BOUND_STATES.value, math.nan, u_min,
                         harmonic, math.nan, predicted)
    ground = spectrum[0].energy
    ratio = ground / u_min if point.exists else math.nan
    return LargeDRow(dimension, CollapseClass.STABLE.value, ground, u_min, harmonic,
                     ratio, predicted)


def classical_limit_scan(family, convention, charge, l, dims, *, executor=None, points=None):
    """One :class:`LargeDRow` per dimension, in the order of ``dims``.

    Rows are independent; pass a ``concurrent.futures`` executor to compute
    them in parallel.  The output does not depend on whether one is used.
    """
    dims = [int(d) for d in dims]
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError("dimensions must be strictly ascending")
    if Family(family) is Family.NEWTONIAN and l == 0 and dims and dims[0] < 4:
        raise ValueError("the Newtonian l = 0 scan needs D >= 4 (no minimum of U_eff below)")

    def row(d):
        return scan_row(family, convention, charge, l, d, points=points)

    if executor is None:
        return [row(d) for d in dims]
    return list(executor.map(row, dims))
