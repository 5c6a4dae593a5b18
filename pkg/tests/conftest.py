import numpy as np
import pytest

from autopt.codes import builtin
from autopt.monomial import MonomialOp, from_s3n

# Worked-example data for the [[4,2,2]] code.
S12_PI46 = (4, 6, 5, 7, 9, 8, 10, 12, 11, 1, 3, 2)
CAL_L = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [1, 1, 1, 1]], dtype=np.uint8)
L_PI30 = np.array([[1, 1, 1, 1], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 1, 1]], dtype=np.uint8)
A_ANTI = np.eye(4, dtype=np.uint8)[::-1].copy()


@pytest.fixture
def c422():
    return builtin("4_2_2")


@pytest.fixture
def pi46():
    return from_s3n(S12_PI46)


@pytest.fixture
def pi30():
    return MonomialOp.from_perm([2, 1, 3, 4], ["HSH"] * 4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
