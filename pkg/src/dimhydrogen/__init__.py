"""Bound states of hydrogen-like atoms in D spatial dimensions.

Two potential families are compared: the D-independent -Z/r and the
point-charge solution of the D-dimensional Poisson equation.
"""

from .eigensolver import (
    BoundState,
    CollapseClass,
    CollapseReport,
    ConvergenceError,
    GridSpec,
    Spectrum,
    SupercriticalError,
    TridiagonalOperator,
    bracket_critical_charge,
    collapse_diagnostic,
    count_below,
    count_nodes,
    discretize,
    eigen_lowest,
    eigenfunction,
    richardson_extrapolate,
    solve_states,
)
from .large_d import ClassicalPoint, LargeDRow, classical_limit_scan, classical_minimum
from .oracles import (
    SpectrumRow,
    VirialReport,
    analytic_energy_airy_1d,
    analytic_energy_newtonian,
    virial_report,
)
from .potentials import (
    Convention,
    Family,
    PotentialModel,
    electrostatic_potential,
    enclosed_flux,
    poisson_residual,
    potential_energy,
    potential_energy_derivative,
)
from .radial import (
    RadialProblem,
    StabilityClass,
    StabilityKind,
    centrifugal_coefficient,
    classify_stability,
    effective_potential,
)
from .shooting import numerov_energy, shoot_numerov
from .specfun import HalfInteger, airy_ai, airy_negative_zero, gamma_half_integer, sphere_surface_area

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
