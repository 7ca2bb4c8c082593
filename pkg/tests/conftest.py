import pytest

from tunnelpuf.array import Challenge, build_array
from tunnelpuf.seeds import derive_seed

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def full_challenge():
    return Challenge.full()


@pytest.fixture(scope="session")
def twenty_arrays():
    return [build_array(derive_seed(2024, i)) for i in range(20)]


@pytest.fixture(scope="session")
def one_array():
    return build_array(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
