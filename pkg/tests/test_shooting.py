import numpy as np
import pytest

from dimhydrogen import GridSpec, numerov_energy, shoot_numerov
from dimhydrogen.eigensolver import default_grid

from .conftest import problem


class HalfOscillator:
    """U_eff = r²/2 on the half line; levels 2k + 3/2 with u(0) = 0."""

    dimension = 1
    angular_momentum = 0

    @staticmethod
    def effective_potential(r):
        return 0.5 * np.asarray(r) ** 2


def test_hydrogen_ground_state_defect(hydrogen3d):
    grid = default_grid(hydrogen3d, 2, points=80000)
    nodes, defect = shoot_numerov(hydrogen3d, grid, -0.5)
    assert nodes == 0 and abs(defect) < 1e-6


def test_node_count_between_levels(hydrogen3d):
    grid = default_grid(hydrogen3d, 3, points=40000)
    assert shoot_numerov(hydrogen3d, grid, -0.3)[0] == 1
    assert shoot_numerov(hydrogen3d, grid, -0.1)[0] == 2


def test_half_oscillator_fixture():
    grid = GridSpec(0.0, 12.0, 40000)
    nodes, defect = shoot_numerov(HalfOscillator(), grid, 1.5)
    assert nodes == 0 and abs(defect) < 1e-6
    nodes, defect = shoot_numerov(HalfOscillator(), grid, 3.5)
    assert nodes == 1 and abs(defect) < 1e-6


def test_numerov_energy_marginal_channel():
    # 2D hydrogen, D = 2 and l = 0: the channel sits exactly on the critical coupling
    p = problem("newtonian", 2)
    grid = default_grid(p, 1, points=80000)
    assert numerov_energy(p, grid, -1.99) == pytest.approx(-2.0, abs=1e-9)


def test_numerov_energy_inner_wall():
    # a wall at r_min: compare with the same wall in the matrix solver's picture
    p = problem("newtonian", 3)
    grid = GridSpec(1e-3, 60.0, 40000)
    e = numerov_energy(p, grid, -0.499)
    assert -0.5 < e < -0.49


def test_supercritical_has_no_regular_start():
    p = problem("consistent", 5, 0, 1.0, "solid-angle")
    with pytest.raises(ValueError):
        shoot_numerov(p, GridSpec(0.0, 10.0, 1000), -1.0)


def test_no_root_raises(hydrogen3d):
    grid = GridSpec(0.0, 60.0, 2000)
    with pytest.raises(ArithmeticError):
        numerov_energy(hydrogen3d, grid, 50.0, window=1e-12)
