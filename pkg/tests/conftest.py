import numpy as np
import pytest

from haarburgers import build_basis, make_test_problem

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def basis3():
    return build_basis(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def tp2():
    return make_test_problem(2, 1.0, sigma=2.0)


@pytest.fixture
def tp3():
    return make_test_problem(3, 0.01, sigma=100.0)
