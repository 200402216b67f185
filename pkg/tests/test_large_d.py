import math

import pytest

from dimhydrogen import Family, classical_limit_scan, classical_minimum
from dimhydrogen.large_d import _u_prime, predicted_ratio

from .conftest import problem


def test_coulomb_minimum_closed_form():
    point = classical_minimum(problem("newtonian", 3, 1))
    assert point.exists
    assert point.r_star == 2.0 and point.u_min == -0.25
    assert point.omega == pytest.approx(1 / (2 * math.sqrt(2)), rel=1e-15)


def test_no_minimum_without_barrier():
    assert not classical_minimum(problem("newtonian", 3, 0)).exists
    assert not classical_minimum(problem("newtonian", 2, 0)).exists


@pytest.mark.parametrize("d", [4, 5, 8])
def test_consistent_high_d_has_no_minimum(d):
    assert not classical_minimum(problem("consistent", d, 0, 1.0, "solid-angle")).exists


def test_consistent_d3_matches_closed_form():
    numeric = classical_minimum(problem("consistent", 3, 2))
    exact = classical_minimum(problem("newtonian", 3, 2))
    assert numeric.r_star == pytest.approx(exact.r_star, rel=1e-12)
    assert numeric.u_min == pytest.approx(exact.u_min, rel=1e-12)
    assert numeric.omega == pytest.approx(exact.omega, rel=1e-8)


def test_log_potential_minimum_is_stationary():
    p = problem("consistent", 2, 2)
    point = classical_minimum(p)
    assert point.exists
    # K/r² + 2 ln r: stationary at r² = K
    assert point.r_star == pytest.approx(math.sqrt(p.centrifugal), rel=1e-12)
    assert abs(_u_prime(p, point.r_star)) < 1e-10


def test_predicted_ratio():
    assert predicted_ratio(Family.NEWTONIAN, 10, 0) == pytest.approx(7 / 9)
    assert predicted_ratio(Family.NEWTONIAN, 100, 0) == pytest.approx(97 / 99)
    assert math.isnan(predicted_ratio(Family.DIMENSION_CONSISTENT, 10, 0))


def test_newtonian_scan_examples():
    rows = classical_limit_scan("newtonian", "gaussian-4pi", 1.0, 0, [10, 100])
    assert rows[0].ratio == pytest.approx(7 / 9, abs=1e-6)
    assert rows[1].ratio == pytest.approx(97 / 99, abs=1e-6)
    assert [r.classification for r in rows] == ["Stable", "Stable"]


def test_consistent_scan_has_no_stable_rows():
    rows = classical_limit_scan("consistent", "solid-angle", 1.0, 0, [4, 5, 6, 7, 8])
    assert [r.classification for r in rows] == ["NoBoundStates"] + ["Collapse"] * 4
    assert all(math.isnan(r.ratio) for r in rows)


def test_scan_preconditions():
    with pytest.raises(ValueError):
        classical_limit_scan("newtonian", "gaussian-4pi", 1.0, 0, [10, 6])
    with pytest.raises(ValueError):
        classical_limit_scan("newtonian", "gaussian-4pi", 1.0, 0, [3, 6])


def test_scan_with_executor_matches_serial():
    from concurrent.futures import ThreadPoolExecutor

    dims = [6, 10, 20]
    serial = classical_limit_scan("newtonian", "gaussian-4pi", 1.0, 0, dims)
    with ThreadPoolExecutor(3) as pool:
        parallel = classical_limit_scan("newtonian", "gaussian-4pi", 1.0, 0, dims, executor=pool)
    assert serial == parallel
