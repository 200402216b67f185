"""Numerov shooting on a logarithmic mesh, used to cross-check the matrix solver.

With x = ln r and u = r^{1/2} y the reduced radial equation becomes

    y'' = g(x) y,   g = 2 r² (U_eff(r) - E) + 1/4,

which has no singular coefficient at the origin: the regular solution starts
as exp(ν x) with ν² = g(-∞).  The mesh spans sixteen decades below r_max with
the same number of points as the matrix grid it checks.
"""

import math

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .eigensolver import count_nodes
from .radial import StabilityKind, classify_stability

# log10 of r_max / r_start for the shooting mesh
LOG_MESH_DECADES = 16.0


def _log_mesh(grid):
    n = grid.interior_points
    x_hi = math.log(grid.r_max)
    if grid.r_min > 0:
        x_lo = math.log(grid.r_min)
    else:
        x_lo = x_hi - LOG_MESH_DECADES * math.log(10.0)
    x = np.linspace(x_lo, x_hi, n)
    return x, x[1] - x[0]


def _turning_index(excess):
    inside = np.flatnonzero(excess < 0)
    n = excess.size
    if inside.size == 0 or not 2 <= inside[-1] <= n - 4:
        return n // 2
    return int(inside[-1])


def _start_exponent(problem, g0):
    """ν of the regular solution y ~ exp(ν x) near the origin."""
    if not hasattr(problem, "potential"):
        return math.sqrt(max(g0, 0.0))
    stability = classify_stability(problem)
    if stability.kind is StabilityKind.SUPERCRITICAL:
        raise ValueError("no regular solution at the origin (supercritical attraction)")
    # exact limit 2c + 1/4; it is zero in the marginal channel
    return math.sqrt(max(2.0 * stability.net_inverse_square_coefficient + 0.25, 0.0))


def _sweeps(problem, grid, energy, match_index=None):
    x, hx = _log_mesh(grid)
    r = np.exp(x)
    excess = problem.effective_potential(r) - energy
    g = 2.0 * r * r * excess + 0.25
    a = hx * hx * g
    m = _turning_index(excess) if match_index is None else match_index
    if grid.r_min > 0:
        y0, y1 = 0.0, 1.0
    else:
        y0, y1 = 1.0, math.exp(_start_exponent(problem, g[0]) * hx)
    out = kernels.numerov_forward(np.ascontiguousarray(a[:m + 2]), y0, y1)
    inward = kernels.numerov_forward(np.ascontiguousarray(a[m - 1:][::-1]), 0.0, 1.0)[::-1]
    return out, inward, hx, m


def shoot_numerov(problem, grid, energy, match_index=None):
    """Interior node count and log-derivative mismatch at ``energy``.

    Integrates outward from the origin (or the wall at r_min) and inward from
    u(r_max) = 0 to the outermost classical turning point, falling back to the
    mesh midpoint.  The mismatch is d ln y/dx from outside minus inside, a
    dimensionless quantity that vanishes at an eigenvalue.
    """
    out, inward, hx, m = _sweeps(problem, grid, energy, match_index)
    # inward[j] sits at mesh index m - 1 + j
    y_out = out[m - 1:m + 2]
    y_in = inward[:3]
    slope_out = (y_out[2] - y_out[0]) / (2 * hx * y_out[1])
    slope_in = (y_in[2] - y_in[0]) / (2 * hx * y_in[1])
    stitched = np.concatenate([out[:m + 1], inward[2:] * (y_out[1] / y_in[1])])
    return count_nodes(stitched[1:-1]), float(slope_out - slope_in)


def numerov_energy(problem, grid, guess, window=1e-6):
    """Energy near ``guess`` where the Numerov matching defect vanishes."""
    _, _, _, m = _sweeps(problem, grid, guess)

    def defect(e):
        return shoot_numerov(problem, grid, e, match_index=m)[1]

    for _ in range(20):
        lo, hi = guess - window, guess + window
        if defect(lo) * defect(hi) < 0:
            return brentq(defect, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        window *= 4.0
    raise ArithmeticError(f"no Numerov eigenvalue found near {guess!r}")
