import pytest
from hypothesis import settings

from alterfold.catdata import load_ising3, load_toy_n1

settings.register_profile("default", deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ising():
    return load_ising3()


@pytest.fixture(scope="session")
def toy():
    return load_toy_n1()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
