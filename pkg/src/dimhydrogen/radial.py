"""The reduced radial problem.

With u(r) = r^{(D-1)/2} R(r) the D-dimensional radial equation becomes

    -1/2 u'' + K/r² u + V(r) u = E u,   K = [l + (D-3)/2][l + (D-1)/2] / 2.

In one dimension there is no angular motion: l is forced to 0, K is 0 and the
problem lives on the half line with u(0) = 0 (the odd sector).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .potentials import PotentialModel, potential_energy

# Inverse-square strength below which the spectrum is unbounded from below.
CRITICAL_INVERSE_SQUARE = -0.125


def centrifugal_coefficient(l, dimension):
    """K(l, D); zero for D = 1."""
    if int(l) != l or l < 0:
        raise ValueError(f"angular momentum must be a non-negative integer, got {l!r}")
    if int(dimension) != dimension or dimension < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {dimension!r}")
    if dimension == 1:
        if l:
            raise ValueError("D = 1 admits only l = 0")
        return 0.0
    # both brackets are multiples of 1/2, so the product is exact in binary
    return (l + (dimension - 3) / 2) * (l + (dimension - 1) / 2) / 2


@dataclass(frozen=True)
class RadialProblem:
    dimension: int
    angular_momentum: int
    potential: PotentialModel

    def __post_init__(self):
        if self.potential.dimension != self.dimension:
            raise ValueError(
                f"potential is for D={self.potential.dimension}, problem is D={self.dimension}")
        if self.dimension == 1 and self.angular_momentum != 0:
            raise ValueError("D = 1 admits only l = 0")
        centrifugal_coefficient(self.angular_momentum, self.dimension)

    @property
    def centrifugal(self):
        return centrifugal_coefficient(self.angular_momentum, self.dimension)

    def effective_potential(self, r):
        return effective_potential(self, r)


def effective_potential(problem, r):
    """U_eff(r) = K/r² + V(r)."""
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("radius must be positive")
    value = problem.centrifugal / arr**2 + potential_energy(problem.potential, arr)
    return float(value) if np.ndim(r) == 0 else value


class StabilityKind(str, Enum):
    REGULAR = "Regular"
    MARGINAL = "Marginal"
    SUPERCRITICAL = "Supercritical"


@dataclass(frozen=True)
class StabilityClass:
    kind: StabilityKind
    # c in U_eff ~ c/r² near the origin; None when V outruns r^-2
    net_inverse_square_coefficient: Optional[float]
    no_intrinsic_bound_states: bool = False


def classify_stability(problem):
    """Small-r classification of U_eff against the fall-to-the-centre threshold."""
    k = problem.centrifugal
    law = problem.potential.inverse_power_law()
    if law is not None and law[1] > 2:
        return StabilityClass(StabilityKind.SUPERCRITICAL, None)
    scale_free = law is not None and law[1] == 2
    c = k - law[0] if scale_free else k
    tol = 1e-12 * max(1.0, abs(c))
    if c < CRITICAL_INVERSE_SQUARE - tol:
        kind = StabilityKind.SUPERCRITICAL
    elif abs(c - CRITICAL_INVERSE_SQUARE) <= tol:
        kind = StabilityKind.MARGINAL
    else:
        kind = StabilityKind.REGULAR
    return StabilityClass(kind, c, no_intrinsic_bound_states=scale_free)
