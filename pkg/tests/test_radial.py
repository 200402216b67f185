import pytest

from dimhydrogen import (
    Convention,
    Family,
    PotentialModel,
    RadialProblem,
    StabilityKind,
    centrifugal_coefficient,
    classify_stability,
    effective_potential,
)
from dimhydrogen.radial import CRITICAL_INVERSE_SQUARE

from .conftest import problem


@pytest.mark.parametrize("l, d, k", [
    (0, 3, 0.0), (1, 3, 1.0), (0, 2, -0.125), (0, 4, 0.375), (2, 5, 6.0), (0, 1, 0.0),
])
def test_centrifugal_values(l, d, k):
    assert centrifugal_coefficient(l, d) == k


def test_centrifugal_validation():
    for args in [(1, 1), (-1, 3), (0.5, 3), (0, 0)]:
        with pytest.raises(ValueError):
            centrifugal_coefficient(*args)


def test_interdimensional_identity_is_exact():
    for d in range(2, 40):
        for l in range(1, 8):
            assert centrifugal_coefficient(l, d) == centrifugal_coefficient(l - 1, d + 2)


def test_problem_checks_dimension_match():
    with pytest.raises(ValueError):
        RadialProblem(3, 0, PotentialModel(Family.NEWTONIAN, 4))
    with pytest.raises(ValueError):
        RadialProblem(1, 1, PotentialModel(Family.NEWTONIAN, 1))


def test_effective_potential_spot_values():
    assert effective_potential(problem("newtonian", 3, 1), 2.0) == pytest.approx(0.25 - 0.5)
    assert effective_potential(problem("newtonian", 2), 1.0) == pytest.approx(-0.125 - 1.0)
    with pytest.raises(ValueError):
        effective_potential(problem("newtonian", 3), 0.0)


@pytest.mark.parametrize("family, d, l, z, conv, kind", [
    ("newtonian", 3, 0, 1, "gaussian-4pi", StabilityKind.REGULAR),
    ("newtonian", 2, 0, 1, "gaussian-4pi", StabilityKind.MARGINAL),
    ("consistent", 2, 0, 1, "gaussian-4pi", StabilityKind.MARGINAL),
    ("consistent", 1, 0, 1, "solid-angle", StabilityKind.REGULAR),
    ("consistent", 4, 0, 0.5, "solid-angle", StabilityKind.REGULAR),
    ("consistent", 4, 0, 1.0, "solid-angle", StabilityKind.MARGINAL),
    ("consistent", 4, 0, 2.0, "solid-angle", StabilityKind.SUPERCRITICAL),
    ("consistent", 5, 0, 1, "solid-angle", StabilityKind.SUPERCRITICAL),
    ("consistent", 5, 3, 1, "gaussian-4pi", StabilityKind.SUPERCRITICAL),
    ("consistent", 8, 0, 0.01, "gaussian-4pi", StabilityKind.SUPERCRITICAL),
])
def test_classification(family, d, l, z, conv, kind):
    assert classify_stability(problem(family, d, l, z, conv)).kind is kind


def test_d4_net_coefficient_and_scale_free_flag():
    s = classify_stability(problem("consistent", 4, 0, 0.5, "solid-angle"))
    assert s.net_inverse_square_coefficient == pytest.approx(0.375 - 0.25)
    assert s.no_intrinsic_bound_states
    assert not classify_stability(problem("newtonian", 3)).no_intrinsic_bound_states


def test_d4_gaussian_critical_charge_is_half_pi():
    # c = 3/8 - Z/π crosses -1/8 at Z = π/2
    z = 3.141592653589793 / 2
    s = classify_stability(problem("consistent", 4, 0, z, "gaussian-4pi"))
    assert s.kind is StabilityKind.MARGINAL
    assert s.net_inverse_square_coefficient == pytest.approx(CRITICAL_INVERSE_SQUARE)
