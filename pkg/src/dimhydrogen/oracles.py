"""Closed-form reference spectra and virial bookkeeping.

Coulomb levels in D dimensions
------------------------------
The centrifugal bracket K(l, D) = [l + (D-3)/2][l + (D-1)/2]/2 equals
L(L+1)/2 with L = l + (D-3)/2, so the reduced equation for -Z/r is the
three-dimensional one with angular momentum L.  Its levels are therefore
-Z²/(2 n_eff²) with n_eff = n_r + L + 1 = n_r + l + (D-1)/2.  In D = 2,
l = 0 this gives n_eff = 1/2 and a ground state of -2Z².

Linear potential on the half line
---------------------------------
-1/2 u'' + k x u = E u with u(0) = 0 is solved by Ai((2k)^{1/3}(x - E/k)),
so E_n = |a_n| (k²/2)^{1/3} where a_n is the n-th zero of Ai.
"""

from dataclasses import dataclass
import math

import numpy as np

from .potentials import Convention, potential_energy, potential_energy_derivative
from .specfun import airy_negative_zero


@dataclass(frozen=True)
class SpectrumRow:
    dimension: int
    angular_momentum: int
    radial_quantum_number: int
    charge: float
    energy: float


def _check_int(name, value, lowest):
    if int(value) != value or value < lowest:
        raise ValueError(f"{name} must be an integer >= {lowest}, got {value!r}")
    return int(value)


def effective_quantum_number(dimension, l, n_r):
    return n_r + l + (dimension - 1) / 2


def analytic_energy_newtonian(dimension, l, n_r, charge):
    """Level n_r of angular momentum l for -Z/r in D >= 2 dimensions."""
    dimension = _check_int("dimension", dimension, 2)
    l = _check_int("l", l, 0)
    n_r = _check_int("n_r", n_r, 0)
    if not charge > 0:
        raise ValueError(f"charge must be positive, got {charge!r}")
    n_eff = effective_quantum_number(dimension, l, n_r)
    return -charge * charge / (2.0 * n_eff * n_eff)


def newtonian_row(dimension, l, n_r, charge):
    return SpectrumRow(dimension, l, n_r, charge,
                       analytic_energy_newtonian(dimension, l, n_r, charge))


def linear_slope(convention, charge):
    """Slope k of V = k x for the consistent one-dimensional potential."""
    if Convention(convention) is Convention.GAUSSIAN_4PI:
        return 2.0 * math.pi * charge
    return float(charge)


def analytic_energy_airy_1d(convention, charge, n):
    """n-th level (1-based) of V = k x on the half line with u(0) = 0."""
    if not charge > 0:
        raise ValueError(f"charge must be positive, got {charge!r}")
    k = linear_slope(convention, charge)
    return -airy_negative_zero(n) * (0.5 * k * k) ** (1.0 / 3.0)


@dataclass(frozen=True)
class VirialReport:
    kinetic: float
    potential_mean: float
    r_dV_dr_mean: float
    residual: float


def virial_report(state, problem):
    """Grid expectations for the virial identity 2⟨T⟩ = ⟨r V'⟩.

    ⟨T⟩ is taken as E - ⟨V⟩, so the centrifugal term counts as kinetic
    energy.  ``residual`` is |2⟨T⟩ - ⟨r V'⟩| / max(|⟨T⟩|, 1e-12).
    """
    if state.problem is not None and state.problem != problem:
        raise ValueError("state was computed for a different problem")
    r = state.grid.nodes()
    u = np.asarray(state.wavefunction, dtype=float)
    if u.shape != r.shape:
        raise ValueError("wavefunction does not live on the state's grid")
    weight = state.grid.spacing * u * u
    norm = float(np.sum(weight))
    model = problem.potential
    v_mean = float(np.sum(weight * potential_energy(model, r))) / norm
    rdv_mean = float(np.sum(weight * r * potential_energy_derivative(model, r, 1))) / norm
    kinetic = state.energy - v_mean
    residual = abs(2.0 * kinetic - rdv_mean) / max(abs(kinetic), 1e-12)
    return VirialReport(kinetic, v_mean, rdv_mean, residual)
