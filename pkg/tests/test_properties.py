import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.linalg import eigvalsh_tridiagonal

from dimhydrogen import (
    TridiagonalOperator,
    analytic_energy_airy_1d,
    analytic_energy_newtonian,
    centrifugal_coefficient,
    count_below,
    count_nodes,
    eigen_lowest,
    gamma_half_integer,
    richardson_extrapolate,
    sphere_surface_area,
)

dims = st.integers(min_value=2, max_value=60)
ls = st.integers(min_value=0, max_value=10)
nrs = st.integers(min_value=0, max_value=10)
charges = st.floats(min_value=0.05, max_value=20.0)


@given(st.integers(min_value=1, max_value=300))
def test_gamma_recurrence(twice):
    x = twice / 2
    assert gamma_half_integer(x + 1) == x * gamma_half_integer(x)


@given(st.integers(min_value=1, max_value=50))
def test_sphere_area_formula(d):
    expected = 2 * math.pi ** (d / 2) / gamma_half_integer(d / 2)
    assert math.isclose(sphere_surface_area(d), expected, rel_tol=1e-14)


@given(dims, st.integers(min_value=1, max_value=10), nrs, charges)
def test_interdimensional_degeneracy(d, l, n_r, z):
    assert analytic_energy_newtonian(d, l, n_r, z) == analytic_energy_newtonian(d + 2, l - 1, n_r, z)
    assert centrifugal_coefficient(l, d) == centrifugal_coefficient(l - 1, d + 2)


@given(dims, ls, nrs, charges)
def test_newtonian_monotonicity(d, l, n_r, z):
    e = analytic_energy_newtonian(d, l, n_r, z)
    assert e < 0
    assert analytic_energy_newtonian(d, l, n_r + 1, z) > e
    assert analytic_energy_newtonian(d, l + 1, n_r, z) > e
    assert analytic_energy_newtonian(d + 1, l, n_r, z) > e


@given(dims, ls, nrs, charges, charges)
def test_newtonian_z_squared_scaling(d, l, n_r, z1, z2):
    ratio = analytic_energy_newtonian(d, l, n_r, z2) / analytic_energy_newtonian(d, l, n_r, z1)
    assert math.isclose(ratio, (z2 / z1) ** 2, rel_tol=1e-13)


@given(st.sampled_from(["gaussian-4pi", "solid-angle"]), charges, charges, st.integers(1, 10))
def test_airy_k_two_thirds_scaling(convention, z1, z2, n):
    ratio = analytic_energy_airy_1d(convention, z2, n) / analytic_energy_airy_1d(convention, z1, n)
    assert math.isclose(ratio, (z2 / z1) ** (2 / 3), rel_tol=1e-12)


@st.composite
def tridiagonals(draw):
    n = draw(st.integers(min_value=3, max_value=40))
    diag = draw(st.lists(st.floats(-10, 10), min_size=n, max_size=n))
    off = draw(st.lists(st.floats(0.01, 5), min_size=n - 1, max_size=n - 1))
    return TridiagonalOperator(np.array(diag), -np.array(off))


@settings(max_examples=60, deadline=None)
@given(tridiagonals(), st.floats(-30, 30))
def test_sturm_count_matches_lapack(op, lam):
    ref = eigvalsh_tridiagonal(op.diagonal, op.off_diagonal)
    assume(np.min(np.abs(ref - lam)) > 1e-8)
    assert count_below(op, lam) == int(np.sum(ref < lam))


@settings(max_examples=40, deadline=None)
@given(tridiagonals(), st.floats(-5, 5))
def test_bisection_accuracy_and_shift(op, c):
    k = min(3, op.size)
    ours = eigen_lowest(op, k)
    ref = eigvalsh_tridiagonal(op.diagonal, op.off_diagonal)[:k]
    assert np.all(np.abs(ours - ref) <= 1e-10 * np.maximum(1, np.abs(ref)))
    shifted = eigen_lowest(op.shifted(c), k)
    assert np.allclose(shifted, ours + c, rtol=0, atol=1e-10 * max(1, np.max(np.abs(ours)) + abs(c)))


@given(st.floats(0.1, 10), st.floats(-5, 5), st.floats(0.5, 4), st.floats(1e-3, 0.5))
def test_richardson_recovers_power_law(e0, c, p, h):
    # the finest correction must stand well above the rounding of e0
    assume(abs(c) * (h / 4) ** p > 1e-6 * e0)
    pairs = [(h / 2**k, e0 + c * (h / 2**k) ** p) for k in range(3)]
    fit = richardson_extrapolate(pairs)
    assert math.isclose(fit.energy, e0, rel_tol=1e-8, abs_tol=1e-8 * abs(c))
    assert math.isclose(fit.order, p, rel_tol=1e-6)


@given(st.integers(0, 8), st.integers(200, 800))
def test_count_nodes_on_sines(k, n):
    x = (np.arange(1, n + 1) - 0.5) / n
    assert count_nodes(np.sin((k + 1) * np.pi * x)) == k
