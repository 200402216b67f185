import math

import numpy as np
import pytest

from dimhydrogen import (
    Convention,
    Family,
    PotentialModel,
    electrostatic_potential,
    enclosed_flux,
    poisson_residual,
    potential_energy,
    potential_energy_derivative,
)
from dimhydrogen.specfun import sphere_surface_area

NEWT, CONS = Family.NEWTONIAN, Family.DIMENSION_CONSISTENT
G4, SA = Convention.GAUSSIAN_4PI, Convention.SOLID_ANGLE


def test_enum_values_parse_from_strings():
    model = PotentialModel("consistent", 2, 1.0, "solid-angle")
    assert model.family is CONS and model.convention is SA


@pytest.mark.parametrize("kwargs", [
    dict(family="newtonian", dimension=0),
    dict(family="newtonian", dimension=2.5),
    dict(family="newtonian", dimension=3, charge=0.0),
    dict(family="consistent", dimension=2, cutoff=-1.0),
    dict(family="bogus", dimension=3),
])
def test_model_validation(kwargs):
    with pytest.raises(ValueError):
        PotentialModel(**kwargs)


def test_newtonian_is_coulomb_in_every_dimension():
    r = np.array([0.5, 1.0, 3.0])
    for d in (1, 2, 5, 12):
        assert np.allclose(potential_energy(PotentialModel(NEWT, d, 2.0), r), -2.0 / r, rtol=0, atol=1e-15)


def test_spot_values():
    assert potential_energy(PotentialModel(CONS, 2), 1.0) == 0.0
    assert potential_energy(PotentialModel(CONS, 3), 2.0) == pytest.approx(-0.5, rel=1e-15)
    assert potential_energy(PotentialModel(CONS, 4, 1.0, SA), 1.0) == pytest.approx(-0.5, rel=1e-15)
    # linear in D = 1: V = (Q/2) x
    assert potential_energy(PotentialModel(CONS, 1, 1.0, G4), 0.5) == pytest.approx(math.pi)
    assert potential_energy(PotentialModel(CONS, 1, 1.0, SA), 0.5) == pytest.approx(0.5)


def test_conventions_coincide_in_three_dimensions():
    r = np.geomspace(1e-3, 1e3, 7)
    a = potential_energy(PotentialModel(CONS, 3, 1.3, G4), r)
    b = potential_energy(PotentialModel(CONS, 3, 1.3, SA), r)
    assert np.allclose(a, b, rtol=1e-15, atol=0)
    assert np.allclose(a, -1.3 / r, rtol=1e-15, atol=0)


def test_electrostatic_potential_is_minus_energy():
    m = PotentialModel(CONS, 6, 0.7, SA)
    assert electrostatic_potential(m, 1.7) == -potential_energy(m, 1.7)


def test_log_potential_cutoff_shift():
    a = PotentialModel(CONS, 2, 1.0, G4, cutoff=1.0)
    b = PotentialModel(CONS, 2, 1.0, G4, cutoff=3.0)
    r = np.array([0.1, 1.0, 10.0])
    shift = potential_energy(b, r) - potential_energy(a, r)
    assert np.allclose(shift, -2.0 * math.log(3.0), rtol=0, atol=1e-14)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 7])
@pytest.mark.parametrize("family", [NEWT, CONS])
def test_derivatives_match_finite_differences(d, family):
    m = PotentialModel(family, d, 1.2, SA)
    r, h = 1.3, 1e-5
    fd1 = (potential_energy(m, r + h) - potential_energy(m, r - h)) / (2 * h)
    fd2 = (potential_energy(m, r + h) - 2 * potential_energy(m, r) + potential_energy(m, r - h)) / h**2
    assert potential_energy_derivative(m, r, 1) == pytest.approx(fd1, rel=1e-8, abs=1e-9)
    assert potential_energy_derivative(m, r, 2) == pytest.approx(fd2, rel=1e-4, abs=1e-4)


def test_derivative_order_validation():
    with pytest.raises(ValueError):
        potential_energy_derivative(PotentialModel(NEWT, 3), 1.0, 3)


def test_radius_must_be_positive():
    m = PotentialModel(NEWT, 3)
    for bad in (0.0, -1.0, [1.0, 0.0], math.nan):
        with pytest.raises(ValueError):
            potential_energy(m, bad)


@pytest.mark.parametrize("convention", [G4, SA])
@pytest.mark.parametrize("d", range(1, 9))
def test_flux_equals_source_strength(d, convention):
    m = PotentialModel(CONS, d, 1.0, convention)
    flux = enclosed_flux(m, np.array([1e-2, 1.0, 1e2]))
    assert np.all(np.abs(flux - m.source_strength) <= 1e-13 * m.source_strength)


def test_source_strengths():
    assert PotentialModel(CONS, 5, 2.0, G4).source_strength == pytest.approx(8 * math.pi)
    assert PotentialModel(CONS, 5, 2.0, SA).source_strength == pytest.approx(2 * sphere_surface_area(5))


def test_newtonian_off_three_dimensions_is_rejected_by_gauss_and_poisson():
    with pytest.raises(ValueError, match="not conserved"):
        enclosed_flux(PotentialModel(NEWT, 4), 1.0)
    with pytest.raises(ValueError):
        poisson_residual(PotentialModel(NEWT, 2), [1.0], 1e-3)
    # D = 3 is the one dimension where -Z/r is harmonic
    assert enclosed_flux(PotentialModel(NEWT, 3, 1.0), 2.0) == pytest.approx(4 * math.pi)


def test_poisson_residual_small_for_consistent_family():
    for d in range(2, 9):
        assert poisson_residual(PotentialModel(CONS, d), [1.0, 2.0, 4.0, 8.0], 2e-4) < 1e-5


def test_poisson_residual_argument_checks():
    m = PotentialModel(CONS, 3)
    with pytest.raises(ValueError):
        poisson_residual(m, [1.0], 0.0)
    with pytest.raises(ValueError):
        poisson_residual(m, [], 1e-3)
    with pytest.raises(ValueError):
        poisson_residual(m, [1e-3], 1e-3)


def test_power_law_and_confinement_flags():
    assert PotentialModel(NEWT, 7).inverse_power_law() == (1.0, 1)
    a, p = PotentialModel(CONS, 5, 1.0, SA).inverse_power_law()
    assert p == 3 and a == pytest.approx(1 / 3)
    assert PotentialModel(CONS, 2).inverse_power_law() is None
    assert PotentialModel(CONS, 1).confining and PotentialModel(CONS, 2).confining
    assert not PotentialModel(CONS, 3).confining and not PotentialModel(NEWT, 1).confining
