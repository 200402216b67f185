import pytest

from dimhydrogen import Family, PotentialModel, RadialProblem

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS = {}


def problem(family, dimension, l=0, charge=1.0, convention="gaussian-4pi", cutoff=1.0):
    return RadialProblem(dimension, l, PotentialModel(family, dimension, charge, convention, cutoff))


@pytest.fixture
def hydrogen3d():
    return problem(Family.NEWTONIAN, 3)


@pytest.fixture
def log2d():
    return problem(Family.DIMENSION_CONSISTENT, 2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
