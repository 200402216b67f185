"""Point-charge potentials in D dimensions.

Two families are provided.  ``NEWTONIAN`` keeps the three-dimensional Z/r
for every D; it does not solve the D-dimensional Poisson equation and is kept
as the baseline.  ``DIMENSION_CONSISTENT`` is the Green's function of the
D-dimensional Laplacian,

    -Δφ = Q δ(r),   Q = 4πZ (GAUSSIAN_4PI)  or  Q = S_{D-1} Z (SOLID_ANGLE),

which is linear in D = 1, logarithmic (with a reference radius r0) in D = 2
and proportional to r^-(D-2) for D >= 3.  Both conventions agree at D = 3.

The electron has charge -1, so its potential energy is V = -φ.
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .specfun import sphere_surface_area


class Family(str, Enum):
    NEWTONIAN = "newtonian"
    DIMENSION_CONSISTENT = "consistent"


class Convention(str, Enum):
    GAUSSIAN_4PI = "gaussian-4pi"
    SOLID_ANGLE = "solid-angle"


@dataclass(frozen=True)
class PotentialModel:
    family: Family
    dimension: int
    charge: float = 1.0
    convention: Convention = Convention.GAUSSIAN_4PI
    cutoff: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "convention", Convention(self.convention))
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.dimension!r}")
        object.__setattr__(self, "dimension", int(self.dimension))
        if not self.charge > 0:
            raise ValueError(f"charge must be positive, got {self.charge!r}")
        if not self.cutoff > 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff!r}")

    @property
    def source_strength(self):
        """Q on the right-hand side of the Poisson equation."""
        if self.convention is Convention.GAUSSIAN_4PI:
            return 4.0 * math.pi * self.charge
        return sphere_surface_area(self.dimension) * self.charge

    @property
    def solves_poisson(self):
        return self.family is Family.DIMENSION_CONSISTENT or self.dimension == 3

    @property
    def confining(self):
        """True when V grows without bound at large r (no ionisation threshold)."""
        return self.family is Family.DIMENSION_CONSISTENT and self.dimension <= 2

    def _power_amplitude(self):
        # φ = A r^-(D-2) for the consistent family with D >= 3
        d = self.dimension
        return self.source_strength / ((d - 2) * sphere_surface_area(d))

    def inverse_power_law(self):
        """(a, p) with V(r) = -a r^-p when V is a pure power, else None."""
        if self.family is Family.NEWTONIAN:
            return self.charge, 1
        if self.dimension >= 3:
            return self._power_amplitude(), self.dimension - 2
        return None

    def phi(self, r):
        """Electrostatic potential φ(r) and its first two radial derivatives."""
        d = self.dimension
        if self.family is Family.NEWTONIAN:
            z = self.charge
            return z / r, -z / r**2, 2.0 * z / r**3
        q = self.source_strength
        if d == 1:
            zero = np.zeros_like(r)
            return -0.5 * q * r, zero - 0.5 * q, zero
        if d == 2:
            c = q / (2.0 * math.pi)
            return -c * np.log(r / self.cutoff), -c / r, c / r**2
        a = self._power_amplitude()
        m = d - 2
        return a * r**-m, -m * a * r ** -(m + 1), m * (m + 1) * a * r ** -(m + 2)


def _radii(r):
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("radius must be positive")
    return arr


def _unwrap(value, like):
    return float(value) if np.ndim(like) == 0 else value


def electrostatic_potential(model, r):
    """φ_D(r) of the point charge described by ``model``."""
    arr = _radii(r)
    return _unwrap(model.phi(arr)[0], r)


def potential_energy(model, r):
    """Electron potential energy V(r) = -φ(r)."""
    arr = _radii(r)
    return _unwrap(-model.phi(arr)[0], r)


def potential_energy_derivative(model, r, order=1):
    """dV/dr (order=1) or d²V/dr² (order=2), analytically."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    arr = _radii(r)
    return _unwrap(-model.phi(arr)[order], r)


def enclosed_flux(model, r):
    """Gauss-law flux -S_{D-1} r^{D-1} dφ/dr; equals Q for every r > 0."""
    if not model.solves_poisson:
        raise ValueError(
            f"the {model.family.value} potential in D={model.dimension} solves no "
            "D-dimensional Poisson equation; its flux is not conserved")
    arr = _radii(r)
    d = model.dimension
    flux = -sphere_surface_area(d) * arr ** (d - 1) * model.phi(arr)[1]
    return _unwrap(flux, r)


def poisson_residual(model, samples, step):
    """Largest |φ'' + (D-1)φ'/r| over ``samples``, by central differences of width ``step``."""
    if not model.solves_poisson:
        raise ValueError(f"the {model.family.value} potential in D={model.dimension} is not harmonic")
    if not step > 0:
        raise ValueError("step must be positive")
    r = np.asarray(samples, dtype=float)
    if r.size == 0:
        raise ValueError("no sample radii given")
    if np.any(r <= 2.0 * step):
        raise ValueError("every sample must exceed twice the difference step")
    plus = electrostatic_potential(model, r + step)
    mid = electrostatic_potential(model, r)
    minus = electrostatic_potential(model, r - step)
    second = (plus - 2.0 * mid + minus) / step**2
    first = (plus - minus) / (2.0 * step)
    return float(np.max(np.abs(second + (model.dimension - 1) * first / r)))
