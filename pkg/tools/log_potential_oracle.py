"""Independent reference levels for V = 2Z ln(r/r0) in two dimensions (l = 0).

Shares no code with the package.  With x = ln r the radial equation for R(r)
in D = 2, l = 0 reads R_xx = 2 r² (V(r) - E) R, a smooth problem that starts
at R = 1, R_x = 0 deep inside the origin region.  Each level is the energy at
which R vanishes at a far wall, found with an adaptive DOP853 integration and
Brent's method.  The numbers printed here are the frozen values used by the
regression tests.

    python tools/log_potential_oracle.py
"""

import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

Z = 1.0
R0 = 1.0
X_START = -40.0
X_WALL = math.log(12.0)   # V(12) - E_3 > 2 Hartree behind a wide barrier


def wall_value(energy):
    def rhs(x, y):
        r = math.exp(x)
        return [y[1], 2.0 * r * r * (2.0 * Z * math.log(r / R0) - energy) * y[0]]

    sol = solve_ivp(rhs, (X_START, X_WALL), [1.0, 0.0], method="DOP853",
                    rtol=1e-13, atol=1e-14)
    return sol.y[0, -1]


def levels(count=3, e_lo=-2.0, e_hi=6.0, samples=100):
    grid = np.linspace(e_lo, e_hi, samples)
    values = [wall_value(e) for e in grid]
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if fa * fb < 0:
            roots.append(brentq(wall_value, a, b, xtol=1e-15, rtol=1e-15))
            if len(roots) == count:
                break
    return roots


if __name__ == "__main__":
    for n, e in enumerate(levels()):
        print(f"E{n} = {e!r}")
